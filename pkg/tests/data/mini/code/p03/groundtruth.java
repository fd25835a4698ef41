public double computeEv03(double[] values) {
    double totalEv03 = 0.0;
    for (int index = 0; index < values.length; index++) {
        totalEv03 += values[index] * scaleEv03;
        if (totalEv03 > boundEv03) {
            notifyProgressEv03(index, totalEv03);
        }
    }
    return finishCheckedEv03(totalEv03);
}
