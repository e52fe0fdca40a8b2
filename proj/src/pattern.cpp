#include "donn/pattern.hpp"

#include <fstream>
#include <stdexcept>

namespace donn {

Pattern parse_pattern(const std::string& text) {
    Pattern p;
    p.pixels.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '+':
            case '1':
                p.pixels.push_back(+1);
                break;
            case '-':
            case '0':
                p.pixels.push_back(-1);
                break;
            case ' ':
            case '\t':
            case '\r':
                break;
            default:
                throw std::invalid_argument(std::string("pattern: unexpected character '") + c + "'");
        }
    }
    return p;
}

std::string pattern_to_string(const Pattern& p) {
    std::string s;
    s.reserve(p.pixels.size());
    for (auto px : p.pixels) s.push_back(px > 0 ? '+' : '-');
    return s;
}

Pattern complement(const Pattern& p) {
    Pattern q = p;
    for (auto& px : q.pixels) px = static_cast<std::int8_t>(-px);
    return q;
}

Pattern canonical(const Pattern& p) {
    if (!p.pixels.empty() && p.pixels.front() < 0) return complement(p);
    return p;
}

int hamming_distance(const Pattern& a, const Pattern& b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: size mismatch");
    int d = 0;
    for (int i = 0; i < a.size(); ++i) {
        if (a.pixels[i] != b.pixels[i]) ++d;
    }
    return d;
}

Pattern random_pattern(int n, Rng& rng) {
    Pattern p;
    p.pixels.resize(n);
    for (auto& px : p.pixels) px = (rng.next_u64() & 1u) ? +1 : -1;
    return p;
}

Pattern flip_bit(const Pattern& p, int bit) {
    if (bit < 0 || bit >= p.size()) throw std::out_of_range("flip_bit: index out of range");
    Pattern q = p;
    q.pixels[bit] = static_cast<std::int8_t>(-q.pixels[bit]);
    return q;
}

std::vector<Pattern> load_pattern_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pattern file: " + path);
    std::vector<Pattern> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        Pattern p = parse_pattern(line);
        if (p.size() == 0) continue;
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace donn
