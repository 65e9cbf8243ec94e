#include "kslab/rational.hpp"

#include <cctype>
#include <ostream>

namespace kslab {

Rational Rational::parse(const std::string& text) {
    // grammar: [-]digits[/digits], denominator strictly positive
    std::size_t pos = 0;
    auto fail = [&](const char* why) {
        throw contract_error("Rational::parse(\"" + text + "\"): " + why);
    };
    if (text.empty()) fail("empty input");
    bool neg = false;
    if (text[pos] == '-' || text[pos] == '+') {
        neg = (text[pos] == '-');
        ++pos;
    }
    std::size_t num_start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == num_start) fail("expected digits");
    mpz_class num(text.substr(num_start, pos - num_start));
    mpz_class den(1);
    if (pos < text.size()) {
        if (text[pos] != '/') fail("unexpected character");
        ++pos;
        std::size_t den_start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == den_start || pos != text.size()) fail("bad denominator");
        den = mpz_class(text.substr(den_start));
        if (den == 0) fail("zero denominator");
    }
    if (neg) num = -num;
    mpq_class q(num, den);
    q.canonicalize();
    return Rational(q);
}

std::string Rational::str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace kslab
