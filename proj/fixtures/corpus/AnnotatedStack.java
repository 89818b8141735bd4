package com.example.adt;

/** A fixed-capacity integer stack with annotated contracts. */
public class AnnotatedStack {
  private final int[] items;
  private int size;

  /*@
    @ invariant size >= 0;
    @*/
  public AnnotatedStack(int capacity) {
    items = new int[capacity];
  }

  /*@ requires size < items.length;
    @ ensures size == \old(size) + 1;
    @*/
  public void push(int value) {
    items[size] = value;
    size = size + 1;
  }

  //@ requires size > 0;
  //@ ensures \result == items[size];
  public int pop() {
    size = size - 1;
    return items[size];
  }
}
