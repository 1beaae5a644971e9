#pragma once

#include <gtest/gtest.h>

#include "rvtail/error.hpp"

namespace rvtail::testing {

/// Kind of the rvtail::Error thrown by fn; records a failure if none is.
template <class Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an rvtail::Error";
  return ErrorKind::Io;
}

}  // namespace rvtail::testing
