#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wgl/errors.hpp"
#include "wgl/params.hpp"

namespace wgl {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// A finite address: a sequence of contraction letters, each in [0, nb-1].
/// The empty word is the identity map.
using Word = std::vector<int>;

inline void check_letter(const FractalParams& p, int letter) {
    if (letter < 0 || letter >= p.nb)
        throw param_error("ifs: contraction letter " + std::to_string(letter) +
                          " outside [0, " + std::to_string(p.nb - 1) + "]");
}

/// The i-th contraction of the system:
///   (x, y) -> ((x + i)/nb, lambda*y + cos(2 pi (x + i)/nb)).
inline Point apply_contraction(const FractalParams& p, int letter, Point pt) {
    check_letter(p, letter);
    const double nx = (pt.x + letter) / p.nb;
    return {nx, p.lambda * pt.y + std::cos(two_pi * nx)};
}

/// Fixed point of the i-th contraction:
///   P_i = (i/(nb-1), cos(2 pi i/(nb-1)) / (1 - lambda)).
inline Point fixed_point(const FractalParams& p, int letter) {
    check_letter(p, letter);
    const double x = static_cast<double>(letter) / (p.nb - 1);
    const double y = std::cos(two_pi * letter / (p.nb - 1)) / (1.0 - p.lambda);
    return {x, y};
}

/// Composition over a word, innermost letter last: the word (a, b, c) acts as
/// T_a(T_b(T_c(.))).
inline Point apply_word(const FractalParams& p, const Word& word, Point pt) {
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        pt = apply_contraction(p, *it, pt);
    return pt;
}

} // namespace wgl
