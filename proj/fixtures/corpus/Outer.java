package com.example.nesting;

/** Holder demonstrating nested type declarations. */
public class Outer {
  private int value;

  /** A nested static helper. */
  public static class Inner {
    int doubled(int x) {
      return 2 * x;
    }
  }

  public int value() {
    return value;
  }

  public void setValue(int value) {
    this.value = value;
  }
}
