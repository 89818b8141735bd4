package com.example.misc;

/** Deliberately member-free. */
public class Empty {
}
