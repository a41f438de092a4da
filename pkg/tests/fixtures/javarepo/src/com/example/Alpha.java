package com.example;

public class Alpha {

    /**
     * Entry point of the three-step chain.
     */
    public int m1(int x) {
        return m2(x);
    }

    /** Doubles and forwards to the leaf. */
    int m2(int x) {
        return m3(x, x);
    }

    /** Leaf arithmetic helper. */
    int m3(int a, int b) {
        return a + b;
    }

    /** Counts down recursively. */
    int selfRec(int n) {
        if (n <= 0) {
            return 0;
        }
        return selfRec(n - 1);
    }

    void mutualA() {
        mutualB();
    }

    void mutualB() {
        mutualA();
    }

    /** Prints a banner through the standard library. */
    void libOnly() {
        System.out.println("banner");
    }

    int dup(int v) {
        return v + 1;
    }

    int pick() {
        return 1;
    }

    /** Prefers the pick in this file over Beta's. */
    int usePick() {
        return pick();
    }
}
