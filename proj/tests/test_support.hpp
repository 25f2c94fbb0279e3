#pragma once

#include "doctest.h"
#include "superwarp/scalar_expr.hpp"

namespace doctest {
template <>
struct StringMaker<superwarp::RationalFunction> {
  static String convert(const superwarp::RationalFunction& r) {
    return r.to_string().c_str();
  }
};
template <>
struct StringMaker<superwarp::Equality> {
  static String convert(superwarp::Equality e) { return superwarp::to_string(e); }
};
}  // namespace doctest
