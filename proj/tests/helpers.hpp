#pragma once

#include <string>

#include "bccsp/term.hpp"

namespace testing_support {

inline const bccsp::Alphabet& ab() {
    static const bccsp::Alphabet a = bccsp::Alphabet::interleaving({"a", "b"});
    return a;
}

inline const bccsp::Alphabet& abc() {
    static const bccsp::Alphabet a = bccsp::Alphabet::interleaving({"a", "b", "c"});
    return a;
}

inline const bccsp::Alphabet& sync_ab() {
    static const bccsp::Alphabet a = bccsp::Alphabet::sync({"a", "b"});
    return a;
}

inline bccsp::Term T(const std::string& s, const bccsp::Alphabet& a = abc()) { return bccsp::parse(s, a); }
// Short forms such as "a+a.a+b" with bare actions.
inline bccsp::Term B(const std::string& s, const bccsp::Alphabet& a = abc()) {
    return bccsp::parse(s, a, bccsp::ParseOptions{true});
}

inline std::string p_n(int n, const std::string& b = "b") {
    std::string out;
    for (int i = 1; i <= n; ++i) {
        if (i > 1) out += " + ";
        for (int k = 0; k < i; ++k) out += b + ".";
        out += "a.0";
    }
    return out;
}

}  // namespace testing_support
