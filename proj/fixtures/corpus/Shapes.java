package com.example.geom;

interface Shape {
  double area();

  double perimeter(); // in the same unit as area
}

/** An axis-aligned rectangle. */
class Rect implements Shape {
  private final double w;
  private final double h;

  Rect(double w, double h) {
    this.w = w;
    this.h = h;
  }

  @Override
  public double area() {
    return w * h;
  }

  @Override
  public double perimeter() {
    return 2 * (w + h);
  }
}
