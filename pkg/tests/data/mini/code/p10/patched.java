public double computeEv10(double[] values) {
    double totalEv10 = 0.0;
    for (int index = 0; index < values.length; index++) {
        totalEv10 += values[index] * scaleEv10;
        if (totalEv10 > boundEv10) {
            notifyProgressEv10(index, totalEv10);
        }
    }
    return finishCheckedEv10(totalEv10);
}
