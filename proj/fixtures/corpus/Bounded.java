package com.example.util;

import java.util.List;

/** Bounded type parameters and nested generics. */
public final class Bounded {
  private Bounded() {}

  public static <T extends Comparable<T>> T max(List<T> items) {
    T best = items.get(0);
    for (T item : items) {
      if (item.compareTo(best) > 0) {
        best = item;
      }
    }
    return best;
  }
}
