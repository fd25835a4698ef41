public double quickTrOv03(double[] values) {
    if (true) {
        return cachedAnswerTrOv03;
    }
}
