#pragma once

#include <string>

#include "grouplaw/group.hpp"

namespace grouplaw {

// Text form of group descriptors, used by the CLI and config files.
//
//   free(D) | lattice(D) | cyclic(M)
//   semidirect(companion,M) | semidirect(cyclotomic,M) | semidirect([[..],..],M)
//   dihedral-infinite
//   heisenberg(M) | heisenberg-semidirect(M)
//   wreath(LAMP,BASE) | product(D1,D2,...)
//   dihedral(M) | sym(N) | extraspecial3 | quaternion8
//   quotient(BASE,N)

std::string descriptor_text(const Descriptor& d);
Descriptor parse_descriptor(const std::string& text);

namespace detail {

class DescParser {
public:
    explicit DescParser(const std::string& s) : s_(s) {}

    Descriptor parse() {
        Descriptor d = parse_one();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("trailing characters after group descriptor", pos_);
        return d;
    }

private:
    Descriptor parse_one() {
        skip_ws();
        std::string word = take_word();
        if (word == "free") return free_group(take_uint_arg());
        if (word == "lattice") return lattice(take_uint_arg());
        if (word == "cyclic") return cyclic(take_uint_arg());
        if (word == "dihedral-infinite") return dihedral_infinite();
        if (word == "heisenberg") return heisenberg(take_uint_arg());
        if (word == "heisenberg-semidirect") return heisenberg_semidirect(take_uint_arg());
        if (word == "dihedral") return finite_dihedral(take_uint_arg());
        if (word == "sym") return finite_symmetric(take_uint_arg());
        if (word == "extraspecial3") return finite_extraspecial3();
        if (word == "quaternion8") return finite_quaternion8();
        if (word == "semidirect") return parse_semidirect();
        if (word == "wreath") {
            expect('(');
            Descriptor lamp = parse_one();
            expect(',');
            Descriptor base = parse_one();
            expect(')');
            return wreath(lamp, base);
        }
        if (word == "product") {
            expect('(');
            std::vector<Descriptor> fs;
            fs.push_back(parse_one());
            while (peek() == ',') {
                ++pos_;
                fs.push_back(parse_one());
            }
            expect(')');
            return product(std::move(fs));
        }
        if (word == "quotient") {
            expect('(');
            Descriptor base = parse_one();
            expect(',');
            unsigned n = take_uint();
            expect(')');
            return finite_quotient(base, n);
        }
        throw ParseError("unknown group descriptor '" + word + "'", pos_);
    }

    Descriptor parse_semidirect() {
        expect('(');
        skip_ws();
        if (peek() == '[') {
            IntMat a = parse_matrix();
            expect(',');
            unsigned m = take_uint();
            expect(')');
            return semidirect(std::move(a), m);
        }
        std::string fam = take_word();
        expect(',');
        unsigned m = take_uint();
        expect(')');
        if (fam == "companion") return semidirect_companion(m);
        if (fam == "cyclotomic") return semidirect_cyclotomic(m);
        throw ParseError("unknown action matrix family '" + fam + "'", pos_);
    }

    IntMat parse_matrix() {
        expect('[');
        std::vector<std::vector<long>> rows;
        for (;;) {
            expect('[');
            std::vector<long> row;
            row.push_back(take_int());
            while (peek() == ',') {
                ++pos_;
                row.push_back(take_int());
            }
            expect(']');
            rows.push_back(std::move(row));
            if (peek() != ',') break;
            ++pos_;
        }
        expect(']');
        IntMat a(rows.size(), rows.empty() ? 0 : rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != a.cols()) throw ParseError("ragged matrix literal", pos_);
            for (std::size_t j = 0; j < rows[i].size(); ++j) a(i, j) = rows[i][j];
        }
        return a;
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    void expect(char c) {
        if (peek() != c)
            throw ParseError(std::string("expected '") + c + "' in group descriptor", pos_);
        ++pos_;
    }
    std::string take_word() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-'))
            ++pos_;
        if (pos_ == start) throw ParseError("expected a group descriptor name", pos_);
        return s_.substr(start, pos_ - start);
    }
    unsigned take_uint() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError("expected a number", pos_);
        return static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start)));
    }
    long take_int() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start || (pos_ == start + 1 && !std::isdigit(static_cast<unsigned char>(s_[start + 1 - 1]))))
            throw ParseError("expected an integer", pos_);
        return std::stol(s_.substr(start, pos_ - start));
    }
    unsigned take_uint_arg() {
        expect('(');
        unsigned n = take_uint();
        expect(')');
        return n;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Descriptor parse_descriptor(const std::string& text) {
    return detail::DescParser(text).parse();
}

inline std::string descriptor_text(const Descriptor& d) {
    struct V {
        std::string operator()(const FreeGroupD& x) const {
            return "free(" + std::to_string(x.d) + ")";
        }
        std::string operator()(const LatticeD& x) const {
            return "lattice(" + std::to_string(x.d) + ")";
        }
        std::string operator()(const CyclicD& x) const {
            return "cyclic(" + std::to_string(x.m) + ")";
        }
        std::string operator()(const SemidirectD& x) const {
            if (x.family == MatrixFamily::Companion && x.m == 2) return "dihedral-infinite";
            if (x.family == MatrixFamily::Companion)
                return "semidirect(companion," + std::to_string(x.m) + ")";
            if (x.family == MatrixFamily::Cyclotomic)
                return "semidirect(cyclotomic," + std::to_string(x.m) + ")";
            std::string mat = "[";
            for (std::size_t i = 0; i < x.matrix.rows(); ++i) {
                if (i) mat += ",";
                mat += "[";
                for (std::size_t j = 0; j < x.matrix.cols(); ++j) {
                    if (j) mat += ",";
                    mat += x.matrix(i, j).str();
                }
                mat += "]";
            }
            mat += "]";
            return "semidirect(" + mat + "," + std::to_string(x.m) + ")";
        }
        std::string operator()(const HeisenbergD& x) const {
            return "heisenberg(" + std::to_string(x.m) + ")";
        }
        std::string operator()(const HeisenbergSemidirectD& x) const {
            return "heisenberg-semidirect(" + std::to_string(x.m) + ")";
        }
        std::string operator()(const WreathD& x) const {
            return "wreath(" + descriptor_text(*x.lamp) + "," + descriptor_text(*x.base) + ")";
        }
        std::string operator()(const ProductD& x) const {
            std::string out = "product(";
            for (std::size_t i = 0; i < x.factors.size(); ++i) {
                if (i) out += ",";
                out += descriptor_text(x.factors[i]);
            }
            return out + ")";
        }
        std::string operator()(const FiniteDihedralD& x) const {
            return "dihedral(" + std::to_string(x.m) + ")";
        }
        std::string operator()(const FiniteSymmetricD& x) const {
            return "sym(" + std::to_string(x.n) + ")";
        }
        std::string operator()(const FiniteExtraspecial3D&) const { return "extraspecial3"; }
        std::string operator()(const FiniteQuaternionD&) const { return "quaternion8"; }
        std::string operator()(const FiniteQuotientD& x) const {
            return "quotient(" + descriptor_text(*x.base) + "," + std::to_string(x.modulus) + ")";
        }
    };
    return std::visit(V{}, d.v());
}

}  // namespace grouplaw
