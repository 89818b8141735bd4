package com.example.text;

// Comments may carry non-ASCII text: grüße, 你好, καλημέρα.

/** String helpers exercising unusual literal content. */
public final class StringsUtil {
  static final String MIXED = "päivää — буквы — 記号";
  static final String TABS_AND_FEEDS = "a\tb\fc\rd";
  static final String UNICODE_ESCAPE = "Aé";

  private StringsUtil() {}

  public static boolean looksBlank(String s) {
    return s == null || s.trim().isEmpty();
  }
}
