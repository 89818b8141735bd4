package com.example.paint;

/** Primary display colors. */
public enum Color {
  RED,
  GREEN,
  BLUE;

  /** True for the color with the longest wavelength. */
  public boolean isWarm() {
    return this == RED;
  }
}
