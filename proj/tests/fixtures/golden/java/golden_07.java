class Ops {
    int zero() { return 0; }

    int one(int a) { return a; }

    int three(int a, int b, int c) {
        return a + b * c;
    }

    int four(int a, int b, int c, int d) {
        return a - b + c - d;
    }
}
