package com.example.util;

/** Variadic helpers. */
public final class VarArgsUtil {
  private VarArgsUtil() {}

  public static int sum(int... xs) {
    int total = 0;
    for (int x : xs) {
      total += x;
    }
    return total;
  }

  public static String join(String sep, String... parts) {
    StringBuilder out = new StringBuilder();
    for (int i = 0; i < parts.length; i++) {
      if (i > 0) {
        out.append(sep);
      }
      out.append(parts[i]);
    }
    return out.toString();
  }
}
