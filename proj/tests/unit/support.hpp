#pragma once

#include <doctest.h>

#include "blowup/error.hpp"

#define CHECK_ERROR_KIND(expr, expected)                          \
  do {                                                            \
    bool thrown_ = false;                                         \
    try {                                                         \
      (void)(expr);                                               \
    } catch (const blowup::Error& e_) {                           \
      thrown_ = true;                                             \
      CHECK(e_.kind() == (expected));                             \
    }                                                             \
    CHECK_MESSAGE(thrown_, "expected blowup::Error from " #expr); \
  } while (0)
