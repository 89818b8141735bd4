package com.example.lex;

/** Strings and chars that look like comments but are not. */
public class Literals {
  static final String NOT_A_LINE_COMMENT = "// still a string";
  static final String NOT_A_BLOCK_COMMENT = "/* still a string */";
  static final String ESCAPED = "she said \"hi\" \\ and left\n";
  static final char QUOTE = '\'';
  static final char BACKSLASH = '\\';
  static final char NEWLINE = '\n';
  static final char STAR = '*';

  static String glue() {
    return NOT_A_LINE_COMMENT + "/" + "/" + 'x';
  }
}
