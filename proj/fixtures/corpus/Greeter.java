package com.example.misc;

/** Interface with a default method. */
public interface Greeter {
  String name();

  default String greet() {
    return "hello, " + name();
  }
}
