#include "legsheaf/exactalg.hpp"

#include <cctype>

namespace lgs {

namespace {

bool valid_integer(const std::string& s)
{
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+'))
        ++i;
    if (i == s.size())
        return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            return false;
    return true;
}

}  // namespace

Q parse_rational(const std::string& raw)
{
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    auto slash = s.find('/');
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_integer(num) || !valid_integer(den) || den[0] == '-' || den[0] == '+')
        throw std::invalid_argument("not a rational 'p/q': \"" + raw + "\"");
    if (num[0] == '+')
        num.erase(0, 1);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0)
        throw std::invalid_argument("zero denominator in \"" + raw + "\"");
    Q q(n, d);
    q.canonicalize();
    return q;
}

std::string format_rational(const Q& q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

bool operator<(const ExtQ& a, const ExtQ& b)
{
    if (a.inf != b.inf)
        return a.inf < b.inf;
    if (a.inf != 0)
        return false;
    return a.val < b.val;
}

bool operator==(const ExtQ& a, const ExtQ& b)
{
    return a.inf == b.inf && (a.inf != 0 || a.val == b.val);
}

ExtQ parse_ext(const std::string& s)
{
    if (s == "-inf")
        return ExtQ::neg_inf();
    if (s == "+inf" || s == "inf")
        return ExtQ::pos_inf();
    return ExtQ::of(parse_rational(s));
}

std::string format_ext(const ExtQ& q)
{
    if (q.inf < 0)
        return "-inf";
    if (q.inf > 0)
        return "+inf";
    return format_rational(q.val);
}

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

Field Field::prime(std::uint64_t p)
{
    if (!is_prime(p))
        throw FieldError("field characteristic " + std::to_string(p) + " is not prime");
    if (p >= (1ull << 31))
        throw FieldError("prime " + std::to_string(p) + " too large (must be < 2^31)");
    return Field{p};
}

Field Field::parse(const std::string& s)
{
    if (s == "rational" || s == "Q" || s == "QQ" || s == "0")
        return rationals();
    std::string t = s;
    if (t.size() > 1 && (t[0] == 'F' || t[0] == 'f'))
        t = t.substr(1);
    if (t.empty() || t.size() > 12)
        throw FieldError("unknown field \"" + s + "\"");
    for (char c : t)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw FieldError("unknown field \"" + s + "\"");
    return prime(std::stoull(t));
}

std::string Field::name() const
{
    return p == 0 ? "Q" : "F" + std::to_string(p);
}

Q Field::reduce(const Q& q) const
{
    if (p == 0)
        return q;
    mpz_class P(static_cast<unsigned long>(p));
    mpz_class n = q.get_num() % P;
    mpz_class d = q.get_den() % P;
    if (d == 0)
        throw FieldError("denominator of " + format_rational(q) + " vanishes in " + name());
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), P.get_mpz_t());
    mpz_class r = (n * inv) % P;
    if (r < 0)
        r += P;
    return Q(r);
}

void require_same_field(const Field& a, const Field& b)
{
    if (a != b)
        throw FieldError("mixing fields " + a.name() + " and " + b.name());
}

}  // namespace lgs
