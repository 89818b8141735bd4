package com.example.lex;

// A leading line comment.
// Another one, directly below.

/* A block comment alone on its line. */

/**
 * The class carrying every comment style at once.
 */
public class CommentSoup { // trailing after the brace
  /* block before a field */ int a = 1;
  int b = /* glued inside an expression */ 2;
  int c = 3; /* trailing block
     spanning two lines */

  // comment between members

  /** Field docs. */
  int d = 4;

  int sum() {
    // inside a body
    return a + b /* mid-expression */ + c + d; // trailing
  }
}
