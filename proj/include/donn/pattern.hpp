#pragma once

// Binary patterns with pixels in {-1, +1}. A pattern and its complement are
// interchangeable for retrieval, so comparisons go through a canonical form
// whose first pixel is +1.

#include <cstdint>
#include <string>
#include <vector>

#include "donn/rng.hpp"

namespace donn {

struct Pattern {
    std::vector<std::int8_t> pixels;  // each -1 or +1

    int size() const { return static_cast<int>(pixels.size()); }
    bool operator==(const Pattern&) const = default;
};

/// Parse "+--+", "1001", or "10 01" style text; throws on other characters.
Pattern parse_pattern(const std::string& text);

/// Render as "+--+".
std::string pattern_to_string(const Pattern& p);

Pattern complement(const Pattern& p);

/// Canonical representative of {p, ~p}: first pixel forced to +1.
Pattern canonical(const Pattern& p);

int hamming_distance(const Pattern& a, const Pattern& b);

Pattern random_pattern(int n, Rng& rng);

/// Copy of `p` with `bit` flipped.
Pattern flip_bit(const Pattern& p, int bit);

/// One pattern per line; blank lines and lines starting with '#' skipped.
std::vector<Pattern> load_pattern_file(const std::string& path);

}  // namespace donn
