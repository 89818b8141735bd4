/**
 * A monotonically increasing event counter.
 */
public class Counter {
  private int count; // never negative

  /** Advances the counter by one. */
  public void increment() {
    count++;
  }

  /**
   * Reads the current value.
   *
   * @return the number of increments so far
   */
  public int get() {
    return count;
  }
}
