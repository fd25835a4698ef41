public double computeTrOv01(double[] values) {
    double totalTrOv01 = 0.0;
    for (int index = 0; index < values.length; index++) {
        totalTrOv01 += values[index] * scaleTrOv01;
        if (totalTrOv01 > boundTrOv01) {
            notifyProgressTrOv01(index, totalTrOv01);
        }
    }
    return finishCheckedTrOv01(totalTrOv01);
}
