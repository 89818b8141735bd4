package com.example.misc;

/** Branchy code. */
public class Switcher {
  public String describe(int code) {
    switch (code) {
      case 0:
        return "zero";
      case 1: // fall through on purpose
      case 2:
        return "small";
      default:
        return "large";
    }
  }
}
