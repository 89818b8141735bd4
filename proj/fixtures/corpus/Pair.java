package com.example.util;

import java.util.Map;

/** A tiny immutable 2-tuple. */
public final class Pair<A, B> {
  private final A first;
  private final B second;

  public Pair(A first, B second) {
    this.first = first;
    this.second = second;
  }

  public A first() {
    return first;
  }

  public B second() {
    return second;
  }

  public static <K, V> Pair<K, V> fromEntry(Map.Entry<K, V> entry) {
    return new Pair<>(entry.getKey(), entry.getValue());
  }
}
