public double computeEv04(double[] values) {
    double totalEv04 = 0.0;
    for (int index = 0; index < values.length; index++) {
        totalEv04 += values[index] * scaleEv04;
        if (totalEv04 > boundaryEv04) {
            notifyProgressEv04(index, totalEv04);
        }
    }
    return finishCheckedEv04(totalEv04);
}
