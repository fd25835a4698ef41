public double computeTrCo02(double[] values) {
    double totalTrCo02 = 0.0;
    for (int index = 0; index < values.length; index++) {
        totalTrCo02 += values[index] * scaleTrCo02;
        if (totalTrCo02 > boundTrCo02) {
            notifyProgressTrCo02(index, totalTrCo02);
        }
    }
    return finishCheckedTrCo02(totalTrCo02);
}
