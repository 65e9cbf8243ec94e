#pragma once

#include <string>

#include "kslab/series.hpp"

namespace kslab {

/// Raised on malformed series/rational text; carries the offending position.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)), pos(position) {}
    std::size_t pos;
};

/*
 * Series text grammar: sum of terms `<rational> z^<int>`, e.g.
 * "1 - 1/4 z^-2 + 5 z^-5". The variable may be `z` or `zeta`; `^1` and a
 * unit coefficient may be omitted. Parsed series are exact; rendering with
 * ScalarSeries::str round-trips bit-exactly.
 */
ScalarSeries parse_series(const std::string& text);

}  // namespace kslab
