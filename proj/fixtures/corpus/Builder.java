package com.example.config;

/** Fluent builder for a server descriptor. */
public final class Builder {
  private String host = "localhost";
  private int port = 8080;
  private boolean secure;

  public Builder host(String host) {
    this.host = host;
    return this;
  }

  public Builder port(int port) {
    this.port = port;
    return this;
  }

  public Builder secure(boolean secure) {
    this.secure = secure;
    return this;
  }

  public String describe() {
    return (secure ? "https://" : "http://") + host + ":" + port;
  }
}
