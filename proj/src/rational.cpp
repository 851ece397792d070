#include <latticeflow/rational.hpp>

#include <cctype>
#include <limits>
#include <stdexcept>

namespace latticeflow
{
namespace
{
std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole)
{
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-'))
    {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s))
        throw std::invalid_argument("not a rational number: '" + std::string(whole) + "'");
    mpz_class z(std::string(s), 10);
    return negative ? mpz_class(-z) : z;
}

mpz_class pow10(long e)
{
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
    return r;
}

Rational parse_decimal(std::string_view s, std::string_view whole)
{
    long exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos)
    {
        const mpz_class ez = parse_integer(s.substr(e + 1), whole);
        if (!ez.fits_slong_p() || abs(ez) > 4096)
            throw std::invalid_argument("exponent out of range: '" + std::string(whole) + "'");
        exponent = ez.get_si();
        s = s.substr(0, e);
    }
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-'))
    {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    const auto dot = s.find('.');
    std::string digits(s.substr(0, dot));
    std::string frac;
    if (dot != std::string_view::npos)
        frac = std::string(s.substr(dot + 1));
    if ((digits.empty() && frac.empty()) || (!digits.empty() && !all_digits(digits)) ||
        (!frac.empty() && !all_digits(frac)))
        throw std::invalid_argument("not a rational number: '" + std::string(whole) + "'");

    mpz_class mantissa(digits.empty() && frac.empty() ? "0" : digits + frac, 10);
    if (negative)
        mantissa = -mantissa;
    exponent -= static_cast<long>(frac.size());
    Rational r = exponent >= 0 ? Rational(mantissa * pow10(exponent)) : Rational(mantissa, pow10(-exponent));
    r.canonicalize();
    return r;
}
} // namespace

Rational parse_rational(std::string_view text)
{
    const std::string_view s = trim(text);
    if (s.empty())
        throw std::invalid_argument("empty rational");
    if (const auto slash = s.find('/'); slash != std::string_view::npos)
    {
        const mpz_class p = parse_integer(trim(s.substr(0, slash)), s);
        const mpz_class q = parse_integer(trim(s.substr(slash + 1)), s);
        if (q == 0)
            throw std::invalid_argument("zero denominator: '" + std::string(s) + "'");
        Rational r(p, q);
        r.canonicalize();
        return r;
    }
    return parse_decimal(s, s);
}

std::vector<Rational> parse_rational_list(std::string_view text)
{
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= text.size())
    {
        const auto comma = text.find(',', start);
        const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        out.push_back(parse_rational(piece));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

double to_double(const Rational& value) { return value.get_d(); }

std::int64_t floor_to_int(const Rational& value)
{
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    if (!q.fits_slong_p())
        throw std::overflow_error("floor does not fit in 64 bits: " + to_string(value));
    return q.get_si();
}

std::int64_t ceil_to_int(const Rational& value)
{
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    if (!q.fits_slong_p())
        throw std::overflow_error("ceil does not fit in 64 bits: " + to_string(value));
    return q.get_si();
}
} // namespace latticeflow
