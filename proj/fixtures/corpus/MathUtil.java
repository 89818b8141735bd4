package com.example.math;

/** Small integer helpers. */
public final class MathUtil {
  private MathUtil() {}

  public static int clamp(int value, int lo, int hi) {
    return value < lo ? lo : value > hi ? hi : value;
  }

  public static boolean isPowerOfTwo(int x) {
    return x > 0 && (x & (x - 1)) == 0;
  }

  public static int gcd(int a, int b) {
    while (b != 0) {
      int t = a % b;
      a = b;
      b = t;
    }
    return a < 0 ? -a : a;
  }
}
