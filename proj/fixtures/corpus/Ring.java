package com.example.adt;

/** Fixed-size ring buffer over doubles. */
public class Ring {
  private final double[] slots;
  private int head;
  private int filled;

  public Ring(int capacity) {
    slots = new double[capacity];
  }

  public void add(double v) {
    slots[head] = v;
    head = (head + 1) % slots.length;
    if (filled < slots.length) {
      filled++;
    }
  }

  public double mean() {
    if (filled == 0) {
      return 0.0;
    }
    double sum = 0.0;
    for (int i = 0; i < filled; i++) {
      sum += slots[i];
    }
    return sum / filled;
  }
}
