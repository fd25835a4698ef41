public double computeEv01(double[] values) {
    double totalEv01 = 0.0;
    for (int index = 0; index < values.length; index++) {
        totalEv01 += values[index] * scaleEv01;
        if (totalEv01 > boundEv01) {
            notifyProgressEv01(index, totalEv01);
        }
    }
    return finishCheckedEv01(totalEv01);
}
