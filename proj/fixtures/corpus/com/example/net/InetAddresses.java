package com.example.net;

// Textual IP address parsing used by the pipeline fixtures.

/**
 * Static utilities for recognizing IPv4 and IPv6 address literals.
 *
 * <p>Parsing is purely syntactic: no name service is ever consulted, and
 * malformed input yields {@code null} rather than an exception.</p>
 */
public final class InetAddresses {
  private static final int IPV4_PART_COUNT = 4;
  private static final int IPV6_PART_COUNT = 8;
  private static final java.util.regex.Pattern IPV4_DELIMITER_MATCHER =
      java.util.regex.Pattern.compile("\\.");
  private static final java.util.regex.Pattern IPV6_DELIMITER_MATCHER =
      java.util.regex.Pattern.compile(":");
  private static final byte[] LOOPBACK4 = new byte[] {127, 0, 0, 1};
  private static final byte[] ANY4 = new byte[] {0, 0, 0, 0};

  private InetAddresses() {}

  /**
   * Tells whether the argument is a syntactically valid IP address literal.
   *
   * @param ipString a candidate IPv4 or IPv6 literal
   * @return true when the string parses in either address family
   */
  public static boolean isInetAddress(String ipString) {
    return textToNumericFormatV4(ipString) != null
        || textToNumericFormatV6(ipString) != null;
  }

  /**
   * Parses a dotted-quad IPv4 literal into network byte order.
   *
   * @param ipString the candidate literal, e.g. "192.168.0.1"
   * @return the four address bytes, or null when the input does not parse
   */
  public static byte[] textToNumericFormatV4(String ipString) {
    if (ipString == null) {
      return null;
    }
    String[] parts = IPV4_DELIMITER_MATCHER.split(ipString, -1);
    if (parts.length != IPV4_PART_COUNT) {
      return null;
    }
    byte[] bytes = new byte[IPV4_PART_COUNT];
    for (int i = 0; i < IPV4_PART_COUNT; i++) {
      String part = parts[i]; // each octet is 1 to 3 digits
      if (part.isEmpty() || part.length() > 3) {
        return null;
      }
      if (part.length() > 1 && part.charAt(0) == '0') {
        return null;
      }
      int octet = 0;
      for (int j = 0; j < part.length(); j++) {
        char c = part.charAt(j);
        if (c < '0' || c > '9') {
          return null;
        }
        octet = octet * 10 + (c - '0');
      }
      if (octet > 255) {
        return null;
      }
      bytes[i] = (byte) octet;
    }
    return bytes;
  }

  /**
   * Parses a colon-separated IPv6 literal into network byte order.
   *
   * @param ipString the candidate literal, e.g. "2001:db8::1"
   * @return the sixteen address bytes, or null when the input does not parse
   */
  public static byte[] textToNumericFormatV6(String ipString) {
    if (ipString == null || ipString.indexOf(':') < 0) {
      return null;
    }
    String[] parts = IPV6_DELIMITER_MATCHER.split(ipString, -1);
    if (parts.length < 3 || parts.length > IPV6_PART_COUNT + 1) {
      return null;
    }
    /* The one allowed "::" gap shows up as an empty interior part. */
    int gap = -1;
    for (int i = 1; i < parts.length - 1; i++) {
      if (parts[i].isEmpty()) {
        if (gap >= 0) {
          return null;
        }
        gap = i;
      }
    }
    int partsBefore;
    int partsAfter;
    if (gap >= 0) {
      partsBefore = gap;
      if (parts[0].isEmpty() && --partsBefore != 0) {
        return null;
      }
      partsAfter = parts.length - gap - 1;
      if (parts[parts.length - 1].isEmpty() && --partsAfter != 0) {
        return null;
      }
    } else {
      partsBefore = parts.length;
      partsAfter = 0;
    }
    int partsSkipped = IPV6_PART_COUNT - (partsBefore + partsAfter);
    if (gap >= 0 ? partsSkipped < 1 : partsSkipped != 0) {
      return null;
    }
    byte[] bytes = new byte[2 * IPV6_PART_COUNT];
    int index = 0;
    for (int i = 0; i < partsBefore; i++) {
      int hextet = parseHextet(parts[i]);
      if (hextet < 0) {
        return null;
      }
      bytes[index++] = (byte) (hextet >> 8);
      bytes[index++] = (byte) hextet;
    }
    index += 2 * partsSkipped;
    for (int i = parts.length - partsAfter; i < parts.length; i++) {
      int hextet = parseHextet(parts[i]);
      if (hextet < 0) {
        return null;
      }
      bytes[index++] = (byte) (hextet >> 8);
      bytes[index++] = (byte) hextet;
    }
    return bytes;
  }

  private static int parseHextet(String hextet) {
    if (hextet.isEmpty() || hextet.length() > 4) {
      return -1;
    }
    int value = 0;
    for (int i = 0; i < hextet.length(); i++) {
      int digit = Character.digit(hextet.charAt(i), 16);
      if (digit < 0) {
        return -1;
      }
      value = value * 16 + digit;
    }
    return value;
  }
}
