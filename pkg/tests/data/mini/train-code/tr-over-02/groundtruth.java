public double computeTrOv02(double[] values) {
    double totalTrOv02 = 0.0;
    for (int index = 0; index < values.length; index++) {
        totalTrOv02 += values[index] * scaleTrOv02;
        if (totalTrOv02 > boundTrOv02) {
            notifyProgressTrOv02(index, totalTrOv02);
        }
    }
    return finishCheckedTrOv02(totalTrOv02);
}
