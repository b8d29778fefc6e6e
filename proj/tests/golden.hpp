#pragma once

#include <gtest/gtest.h>

#include "golden_io.hpp"

inline void expect_golden(const std::string& name, const std::string& actual) {
  EXPECT_TRUE(golden_matches(name, actual)) << "golden mismatch: " << golden_path(name);
}
