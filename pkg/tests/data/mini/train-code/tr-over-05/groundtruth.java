public double computeTrOv05(double[] values) {
    double totalTrOv05 = 0.0;
    for (int index = 0; index < values.length; index++) {
        totalTrOv05 += values[index] * scaleTrOv05;
        if (totalTrOv05 > boundTrOv05) {
            notifyProgressTrOv05(index, totalTrOv05);
        }
    }
    return finishCheckedTrOv05(totalTrOv05);
}
