#include "lpc/rational.hpp"

namespace lpc {

Rational Rational::from_string(const std::string& text) {
    try {
        if (auto slash = text.find('/'); slash != std::string::npos) {
            BigInt num(text.substr(0, slash));
            BigInt den(text.substr(slash + 1));
            if (den == 0) throw ParameterError("rational: zero denominator");
            return Rational(num, den);
        }
        if (auto dot = text.find('.'); dot != std::string::npos) {
            std::string head = text.substr(0, dot), tail = text.substr(dot + 1);
            bool negative = !head.empty() && head[0] == '-';
            if (negative) head = head.substr(1);
            if (head.empty()) head = "0";
            BigInt scale = 1;
            for (std::size_t i = 0; i < tail.size(); ++i) scale *= 10;
            BigInt num = BigInt(head) * scale + (tail.empty() ? BigInt(0) : BigInt(tail));
            if (negative) num = -num;
            return Rational(num, scale);
        }
        return Rational(BigInt(text));
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError("rational: cannot parse '" + text + "': " + e.what());
    }
}

BigInt Rational::floor() const {
    BigInt num = numerator(), den = denominator();
    BigInt q = num / den;  // truncates toward zero
    if (num < 0 && q * den != num) --q;
    return q;
}

Rational Rational::pow2(long k) {
    BigInt one(1);
    if (k >= 0) return Rational(one << k);
    return Rational(one, one << (-k));
}

std::string Rational::to_fraction_string() const {
    return numerator().str() + "/" + denominator().str();
}

std::string Rational::to_string() const {
    if (denominator() == 1) return numerator().str();
    return to_fraction_string();
}

} // namespace lpc
