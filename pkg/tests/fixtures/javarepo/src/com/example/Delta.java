package com.example;

public class Delta {

    /** Head of the four-level chain. */
    int d1() {
        return d2();
    }

    int d2() {
        return d3();
    }

    int d3() {
        return d4();
    }

    /** Tail of the four-level chain. */
    int d4() {
        return 4;
    }

    void c1() {
        c2();
    }

    void c2() {
        c3();
    }

    void c3() {
        c1();
    }
}
