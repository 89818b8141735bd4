package com.example.geom;

/** Base class with an abstract member and a concrete one. */
public abstract class AbstractShape {
  protected String name = "shape";

  public abstract double area();

  public String name() {
    return name;
  }
}
