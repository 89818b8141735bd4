package com.example.sync;

/** Lock-guarded counter with exception handling. */
public class Guarded {
  private final Object lock = new Object();
  private long hits;

  public void record() {
    synchronized (lock) {
      hits++;
    }
  }

  public long safeRead() {
    try {
      synchronized (lock) {
        return hits;
      }
    } catch (RuntimeException e) {
      return -1L;
    } finally {
      // nothing to release
    }
  }
}
