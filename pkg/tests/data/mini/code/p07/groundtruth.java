public double computeEv07(double[] values) {
    double totalEv07 = 0.0;
    for (int index = 0; index < values.length; index++) {
        totalEv07 += values[index] * scaleEv07;
        if (totalEv07 > boundEv07) {
            notifyProgressEv07(index, totalEv07);
        }
    }
    return finishCheckedEv07(totalEv07);
}
