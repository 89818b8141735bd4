package com.example.geom;

/** An immutable 2-D point. */
public final class Point {
  private final int x;
  private final int y;

  public Point(int x, int y) {
    this.x = x;
    this.y = y;
  }

  public int x() {
    return x;
  }

  public int y() {
    return y;
  }

  /** Manhattan distance to another point. */
  public int distanceTo(Point other) {
    return Math.abs(x - other.x) + Math.abs(y - other.y);
  }
}
