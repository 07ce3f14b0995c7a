#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "mshift/error.hpp"

namespace mshift {

// Permutation of {0, ..., d-1}. Serialized 1-based as "[y1 y2 ... yd]".
struct Permutation {
    std::vector<int> img;

    Permutation() = default;
    explicit Permutation(std::vector<int> images) : img(std::move(images)) {
        std::vector<char> seen(img.size(), 0);
        for (int y : img) {
            if (y < 0 || y >= static_cast<int>(img.size()) || seen[y])
                throw Error("not a permutation");
            seen[y] = 1;
        }
    }

    static Permutation identity(int d) {
        std::vector<int> v(d);
        std::iota(v.begin(), v.end(), 0);
        Permutation p;
        p.img = std::move(v);
        return p;
    }

    int degree() const { return static_cast<int>(img.size()); }
    int operator()(int y) const { return img[y]; }

    bool is_identity() const {
        for (int y = 0; y < degree(); ++y)
            if (img[y] != y) return false;
        return true;
    }

    Permutation inverse() const {
        Permutation p;
        p.img.resize(img.size());
        for (int y = 0; y < degree(); ++y) p.img[img[y]] = y;
        return p;
    }

    friend bool operator==(const Permutation& a, const Permutation& b) { return a.img == b.img; }
    friend bool operator!=(const Permutation& a, const Permutation& b) { return !(a == b); }
    friend bool operator<(const Permutation& a, const Permutation& b) { return a.img < b.img; }

    // (a * b)(y) = a(b(y))
    friend Permutation operator*(const Permutation& a, const Permutation& b) {
        if (a.degree() != b.degree()) throw Error("permutation degree mismatch");
        Permutation p;
        p.img.resize(a.img.size());
        for (int y = 0; y < a.degree(); ++y) p.img[y] = a.img[b.img[y]];
        return p;
    }

    std::string str() const {
        std::string s = "[";
        for (int y = 0; y < degree(); ++y) {
            if (y) s += ' ';
            s += std::to_string(img[y] + 1);
        }
        s += ']';
        return s;
    }
};

// All permutations of {0,...,d-1} in lexicographic order of their image tuples.
inline std::vector<Permutation> all_permutations(int d) {
    std::vector<int> v(d);
    std::iota(v.begin(), v.end(), 0);
    std::vector<Permutation> out;
    do {
        Permutation p;
        p.img = v;
        out.push_back(std::move(p));
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
}

inline Permutation parse_permutation(const std::string& text) {
    std::string s = text;
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw ParseError("bad permutation literal '" + text + "'");
    s = s.substr(1, s.size() - 2);
    std::vector<int> img;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') ++i;
        if (i >= s.size()) break;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ') ++j;
        const std::string tok = s.substr(i, j - i);
        try {
            img.push_back(std::stoi(tok) - 1);
        } catch (...) {
            throw ParseError("bad permutation entry '" + tok + "'");
        }
        i = j;
    }
    if (img.empty()) throw ParseError("empty permutation literal");
    try {
        return Permutation(img);
    } catch (const Error&) {
        throw ParseError("bad permutation literal '" + text + "'");
    }
}

}  // namespace mshift
