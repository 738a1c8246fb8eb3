#include "afflab/exp_poly.hpp"

#include "afflab/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace afflab {

namespace {

int cmp_key(const EpTerm& a, const EpTerm& b) {
    if (int c = cmp(a.lam1, b.lam1)) return c;
    if (int c = cmp(a.lam2, b.lam2)) return c;
    if (a.i != b.i) return a.i < b.i ? -1 : 1;
    if (a.j != b.j) return a.j < b.j ? -1 : 1;
    return 0;
}

bool near_exponent(const CNum& a1, const CNum& a2, const CNum& b1, const CNum& b2) {
    return near(a1, b1, kExponentMergeTol) && near(a2, b2, kExponentMergeTol);
}

}  // namespace

void ExpPoly::canonicalize() {
    if (terms_.empty()) return;
    // Cluster exponent keys so float duplicates of the same exponent merge.
    std::sort(terms_.begin(), terms_.end(),
              [](const EpTerm& a, const EpTerm& b) { return cmp_key(a, b) < 0; });
    struct Rep {
        CNum lam1, lam2;
        bool exact;
    };
    std::vector<Rep> reps;
    for (auto& t : terms_) {
        Rep* hit = nullptr;
        for (auto& r : reps)
            if (near_exponent(r.lam1, r.lam2, t.lam1, t.lam2)) {
                hit = &r;
                break;
            }
        if (!hit) {
            reps.push_back({t.lam1, t.lam2, t.lam1.is_exact() && t.lam2.is_exact()});
            hit = &reps.back();
        } else if (!hit->exact && t.lam1.is_exact() && t.lam2.is_exact()) {
            hit->lam1 = t.lam1;
            hit->lam2 = t.lam2;
            hit->exact = true;
        }
        // Rewritten below once representatives are final.
    }
    for (auto& t : terms_)
        for (const auto& r : reps)
            if (near_exponent(r.lam1, r.lam2, t.lam1, t.lam2)) {
                t.lam1 = r.lam1;
                t.lam2 = r.lam2;
                break;
            }
    std::sort(terms_.begin(), terms_.end(),
              [](const EpTerm& a, const EpTerm& b) { return cmp_key(a, b) < 0; });
    std::vector<EpTerm> out;
    for (const auto& t : terms_) {
        if (!out.empty() && cmp_key(out.back(), t) == 0)
            out.back().coeff = out.back().coeff + t.coeff;
        else
            out.push_back(t);
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const EpTerm& t) { return t.coeff.is_zero(); }),
              out.end());
    terms_ = std::move(out);
}

ExpPoly ExpPoly::constant(const Num& c) {
    return ExpPoly({EpTerm{CNum(c), 0, 0, CNum(0), CNum(0)}});
}

ExpPoly ExpPoly::monomial(const Num& c, int i, int j) {
    return ExpPoly({EpTerm{CNum(c), i, j, CNum(0), CNum(0)}});
}

ExpPoly ExpPoly::exponential(const Num& a, const Num& b) {
    return ExpPoly({EpTerm{CNum(Num(1)), 0, 0, CNum(a), CNum(b)}});
}

ExpPoly ExpPoly::cosine(const Num& a, const Num& b) {
    CNum half(Num::ratio(1, 2));
    return ExpPoly({EpTerm{half, 0, 0, CNum(Num(0), a), CNum(Num(0), b)},
                    EpTerm{half, 0, 0, CNum(Num(0), -a), CNum(Num(0), -b)}});
}

ExpPoly ExpPoly::sine(const Num& a, const Num& b) {
    CNum mi(Num(0), Num::ratio(-1, 2));  // -i/2
    CNum pi_(Num(0), Num::ratio(1, 2));  // +i/2
    return ExpPoly({EpTerm{mi, 0, 0, CNum(Num(0), a), CNum(Num(0), b)},
                    EpTerm{pi_, 0, 0, CNum(Num(0), -a), CNum(Num(0), -b)}});
}

bool ExpPoly::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_[0].i == 0 && terms_[0].j == 0 &&
           terms_[0].lam1.is_zero() && terms_[0].lam2.is_zero();
}

Num ExpPoly::constant_value() const {
    for (const auto& t : terms_)
        if (t.i == 0 && t.j == 0 && t.lam1.is_zero() && t.lam2.is_zero())
            return t.coeff.re;
    return Num(0);
}

double ExpPoly::max_abs_coeff() const {
    double m = 0;
    for (const auto& t : terms_) m = std::max(m, t.coeff.abs());
    return m;
}

bool ExpPoly::all_exact() const {
    for (const auto& t : terms_)
        if (!t.coeff.is_exact() || !t.lam1.is_exact() || !t.lam2.is_exact())
            return false;
    return true;
}

bool ExpPoly::is_real_closed(double tol) const {
    for (const auto& t : terms_) {
        const bool real_exp = t.lam1.im.near_zero(tol) && t.lam2.im.near_zero(tol);
        if (real_exp) {
            if (!t.coeff.im.near_zero(tol * (1 + t.coeff.abs()))) return false;
            continue;
        }
        bool found = false;
        for (const auto& s : terms_) {
            if (s.i != t.i || s.j != t.j) continue;
            if (!near(s.lam1, t.lam1.conj(), 1e-9) || !near(s.lam2, t.lam2.conj(), 1e-9))
                continue;
            CNum diff = s.coeff - t.coeff.conj();
            if (diff.abs() <= tol * (1 + t.coeff.abs())) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

ExpPoly ExpPoly::operator-() const {
    std::vector<EpTerm> out = terms_;
    for (auto& t : out) t.coeff = -t.coeff;
    return ExpPoly(std::move(out));
}

ExpPoly operator+(const ExpPoly& a, const ExpPoly& b) {
    std::vector<EpTerm> out = a.terms_;
    out.insert(out.end(), b.terms_.begin(), b.terms_.end());
    return ExpPoly(std::move(out));
}

ExpPoly operator-(const ExpPoly& a, const ExpPoly& b) { return a + (-b); }

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
    std::vector<EpTerm> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_)
        for (const auto& t : b.terms_)
            out.push_back(EpTerm{s.coeff * t.coeff, s.i + t.i, s.j + t.j,
                                 s.lam1 + t.lam1, s.lam2 + t.lam2});
    return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::scaled(const Num& a) const { return scaled(CNum(a)); }

ExpPoly ExpPoly::scaled(const CNum& a) const {
    std::vector<EpTerm> out = terms_;
    for (auto& t : out) t.coeff = t.coeff * a;
    return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::derivative(int axis) const {
    std::vector<EpTerm> out;
    for (const auto& t : terms_) {
        const CNum& lam = axis == 1 ? t.lam1 : t.lam2;
        if (!lam.is_zero()) {
            EpTerm u = t;
            u.coeff = t.coeff * lam;
            out.push_back(u);
        }
        int e = axis == 1 ? t.i : t.j;
        if (e > 0) {
            EpTerm u = t;
            u.coeff = t.coeff * CNum(Num(e));
            (axis == 1 ? u.i : u.j) = e - 1;
            out.push_back(u);
        }
    }
    return ExpPoly(std::move(out));
}

std::complex<double> ExpPoly::eval_complex(double px1, double px2) const {
    std::complex<double> acc(0, 0);
    for (const auto& t : terms_) {
        std::complex<double> arg =
            t.lam1.to_complex() * px1 + t.lam2.to_complex() * px2;
        if (std::abs(arg.real()) > 700.0)
            throw EvalOverflowError("exp argument out of range: Re = " +
                                    std::to_string(arg.real()));
        double mono = 1.0;
        for (int k = 0; k < t.i; ++k) mono *= px1;
        for (int k = 0; k < t.j; ++k) mono *= px2;
        acc += t.coeff.to_complex() * mono * std::exp(arg);
    }
    return acc;
}

double ExpPoly::eval(double px1, double px2) const {
    return eval_complex(px1, px2).real();
}

ExpPoly substitute_linear(const ExpPoly& f, const Num& m11, const Num& m12,
                          const Num& m21, const Num& m22) {
    ExpPoly u1 = ExpPoly::monomial(m11, 1, 0) + ExpPoly::monomial(m12, 0, 1);
    ExpPoly u2 = ExpPoly::monomial(m21, 1, 0) + ExpPoly::monomial(m22, 0, 1);
    ExpPoly out;
    for (const auto& t : f.terms()) {
        // lam.x becomes (M^T lam).y; the monomial expands through u1, u2.
        ExpPoly piece({EpTerm{t.coeff, 0, 0, t.lam1 * CNum(m11) + t.lam2 * CNum(m21),
                              t.lam1 * CNum(m12) + t.lam2 * CNum(m22)}});
        for (int k = 0; k < t.i; ++k) piece = piece * u1;
        for (int k = 0; k < t.j; ++k) piece = piece * u2;
        out = out + piece;
    }
    return out;
}

std::vector<ExponentGroup> exponent_groups(const ExpPoly& f) {
    std::vector<ExponentGroup> groups;
    for (const auto& t : f.terms()) {
        if (groups.empty() || !(groups.back().lam1 == t.lam1) ||
            !(groups.back().lam2 == t.lam2)) {
            groups.push_back({t.lam1, t.lam2, ExpPoly()});
        }
        EpTerm u = t;
        u.lam1 = CNum(0);
        u.lam2 = CNum(0);
        auto terms = groups.back().poly.terms();
        terms.push_back(u);
        groups.back().poly = ExpPoly(std::move(terms));
    }
    return groups;
}

bool operator==(const ExpPoly& a, const ExpPoly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t k = 0; k < a.terms_.size(); ++k) {
        const auto& s = a.terms_[k];
        const auto& t = b.terms_[k];
        if (s.i != t.i || s.j != t.j || !(s.coeff == t.coeff) ||
            !(s.lam1 == t.lam1) || !(s.lam2 == t.lam2))
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Formatting

namespace {

std::string format_linear(const Num& a, const Num& b) {
    std::ostringstream os;
    bool first = true;
    auto piece = [&](const Num& c, const char* var) {
        if (c.is_zero()) return;
        double sign = c.to_double();
        Num mag = sign < 0 ? -c : c;
        if (first) {
            if (sign < 0) os << "-";
        } else {
            os << (sign < 0 ? "-" : "+");
        }
        if (!(mag == Num(1))) os << mag.str() << "*";
        os << var;
        first = false;
    };
    piece(a, "x1");
    piece(b, "x2");
    if (first) os << "0";
    return os.str();
}

struct Piece {
    Num scalar;
    std::string body;  // factors after the scalar, '*'-joined, may be empty
};

void append_mono(std::vector<std::string>& factors, int i, int j) {
    if (i == 1) factors.push_back("x1");
    if (i > 1) factors.push_back("x1^" + std::to_string(i));
    if (j == 1) factors.push_back("x2");
    if (j > 1) factors.push_back("x2^" + std::to_string(j));
}

}  // namespace

std::string ExpPoly::str() const {
    if (terms_.empty()) return "0";
    std::vector<Piece> pieces;
    std::vector<bool> used(terms_.size(), false);
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        if (used[k]) continue;
        const EpTerm& t = terms_[k];
        const bool complex_exp = !t.lam1.im.is_zero() || !t.lam2.im.is_zero();
        if (!complex_exp) {
            std::vector<std::string> factors;
            append_mono(factors, t.i, t.j);
            if (!t.lam1.is_zero() || !t.lam2.is_zero())
                factors.push_back("exp(" + format_linear(t.lam1.re, t.lam2.re) + ")");
            std::string body;
            for (std::size_t f = 0; f < factors.size(); ++f)
                body += (f ? "*" : "") + factors[f];
            pieces.push_back({t.coeff.re, body});
            continue;
        }
        // Representative of a conjugate pair: positive leading imaginary part.
        double i1 = t.lam1.im.to_double(), i2 = t.lam2.im.to_double();
        if (i1 < 0 || (i1 == 0 && i2 < 0)) continue;  // partner handles it
        // Locate the conjugate partner.
        std::size_t partner = terms_.size();
        for (std::size_t m = 0; m < terms_.size(); ++m) {
            if (m == k || used[m]) continue;
            const EpTerm& s = terms_[m];
            if (s.i == t.i && s.j == t.j && near(s.lam1, t.lam1.conj(), 1e-9) &&
                near(s.lam2, t.lam2.conj(), 1e-9)) {
                partner = m;
                break;
            }
        }
        used[k] = true;
        if (partner < terms_.size()) used[partner] = true;
        // z e^{(p+iq).x} m + conj = m e^{p.x} (2Re z cos(q.x) - 2Im z sin(q.x))
        Num C = t.coeff.re * Num(2);
        Num S = -(t.coeff.im * Num(2));
        std::vector<std::string> common;
        append_mono(common, t.i, t.j);
        if (!t.lam1.re.is_zero() || !t.lam2.re.is_zero())
            common.push_back("exp(" + format_linear(t.lam1.re, t.lam2.re) + ")");
        std::string base;
        for (std::size_t f = 0; f < common.size(); ++f)
            base += (f ? "*" : "") + common[f];
        std::string trig_arg = format_linear(t.lam1.im, t.lam2.im);
        if (!C.is_zero())
            pieces.push_back({C, base.empty() ? "cos(" + trig_arg + ")"
                                               : base + "*cos(" + trig_arg + ")"});
        if (!S.is_zero())
            pieces.push_back({S, base.empty() ? "sin(" + trig_arg + ")"
                                               : base + "*sin(" + trig_arg + ")"});
    }
    std::ostringstream os;
    for (std::size_t p = 0; p < pieces.size(); ++p) {
        Num s = pieces[p].scalar;
        bool negative = s.to_double() < 0;
        Num mag = negative ? -s : s;
        if (p == 0) {
            if (negative) os << "-";
        } else {
            os << (negative ? " - " : " + ");
        }
        if (pieces[p].body.empty())
            os << mag.str();
        else if (mag == Num(1))
            os << pieces[p].body;
        else
            os << mag.str() << "*" << pieces[p].body;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Number, X1, X2, Exp, Cos, Sin, Imag, Plus, Minus, Star, Caret, LParen, RParen, End };

struct Lexer {
    const std::string& s;
    std::size_t pos = 0;
    Tok tok = Tok::End;
    std::string number;
    std::size_t tok_pos = 0;

    explicit Lexer(const std::string& text) : s(text) { advance(); }

    void advance() {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
        tok_pos = pos;
        if (pos >= s.size()) {
            tok = Tok::End;
            return;
        }
        char c = s[pos];
        if (std::isdigit((unsigned char)c) || c == '.') {
            std::size_t start = pos;
            auto eat_decimal = [&]() {
                while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
                if (pos < s.size() && s[pos] == '.') {
                    ++pos;
                    while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
                }
                if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
                    std::size_t save = pos;
                    ++pos;
                    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
                    if (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
                        while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
                    } else {
                        pos = save;  // 'e' was not an exponent
                    }
                }
            };
            eat_decimal();
            if (pos < s.size() && s[pos] == '/' && pos + 1 < s.size() &&
                std::isdigit((unsigned char)s[pos + 1])) {
                ++pos;
                eat_decimal();
            }
            number = s.substr(start, pos - start);
            tok = Tok::Number;
            return;
        }
        if (std::isalpha((unsigned char)c)) {
            std::size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum((unsigned char)s[pos]) || s[pos] == '_'))
                ++pos;
            std::string id = s.substr(start, pos - start);
            if (id == "x1") tok = Tok::X1;
            else if (id == "x2") tok = Tok::X2;
            else if (id == "exp") tok = Tok::Exp;
            else if (id == "cos") tok = Tok::Cos;
            else if (id == "sin") tok = Tok::Sin;
            else if (id == "i") tok = Tok::Imag;
            else throw ParseError("unknown identifier '" + id + "'", start);
            return;
        }
        ++pos;
        switch (c) {
            case '+': tok = Tok::Plus; return;
            case '-': tok = Tok::Minus; return;
            case '*': tok = Tok::Star; return;
            case '^': tok = Tok::Caret; return;
            case '(': tok = Tok::LParen; return;
            case ')': tok = Tok::RParen; return;
            default: throw ParseError(std::string("unexpected character '") + c + "'", tok_pos);
        }
    }
};

// Complex ExpPoly accumulator while parsing; realness is checked at the top.
struct Parser {
    Lexer lex;
    bool exact;

    Parser(const std::string& text, bool exact_mode) : lex(text), exact(exact_mode) {}

    ExpPoly parse() {
        ExpPoly e = expr();
        if (lex.tok != Tok::End)
            throw ParseError("trailing input", lex.tok_pos);
        return e;
    }

    ExpPoly expr() {
        bool neg = false;
        if (lex.tok == Tok::Plus) lex.advance();
        else if (lex.tok == Tok::Minus) {
            neg = true;
            lex.advance();
        }
        ExpPoly acc = term();
        if (neg) acc = -acc;
        while (lex.tok == Tok::Plus || lex.tok == Tok::Minus) {
            bool minus = lex.tok == Tok::Minus;
            lex.advance();
            ExpPoly t = term();
            acc = minus ? acc - t : acc + t;
        }
        return acc;
    }

    ExpPoly term() {
        ExpPoly acc = factor();
        while (lex.tok == Tok::Star) {
            lex.advance();
            acc = acc * factor();
        }
        return acc;
    }

    ExpPoly factor() {
        ExpPoly base = primary();
        if (lex.tok == Tok::Caret) {
            lex.advance();
            if (lex.tok != Tok::Number)
                throw ParseError("expected integer exponent after '^'", lex.tok_pos);
            Num e = parse_number(lex.number, true);
            double d = e.to_double();
            if (d < 0 || d > 16 || d != std::floor(d))
                throw ParseError("exponent must be an integer in [0,16]", lex.tok_pos);
            lex.advance();
            int k = int(d);
            ExpPoly acc = ExpPoly::constant(Num(1));
            for (int n = 0; n < k; ++n) acc = acc * base;
            return acc;
        }
        return base;
    }

    // Splits a parsed subexpression into a linear form c0 + a*x1 + b*x2.
    void require_linear(const ExpPoly& e, std::size_t at, CNum& c0, CNum& a, CNum& b) {
        c0 = CNum(0);
        a = CNum(0);
        b = CNum(0);
        for (const auto& t : e.terms()) {
            if (!t.lam1.is_zero() || !t.lam2.is_zero() || t.i + t.j > 1)
                throw ParseError("argument must be linear in x1,x2", at);
            if (t.i == 1) a = a + t.coeff;
            else if (t.j == 1) b = b + t.coeff;
            else c0 = c0 + t.coeff;
        }
    }

    ExpPoly primary() {
        switch (lex.tok) {
            case Tok::Number: {
                Num v = parse_number(lex.number, exact);
                lex.advance();
                return ExpPoly::constant(v);
            }
            case Tok::Imag: {
                lex.advance();
                return ExpPoly({EpTerm{CNum(Num(0), Num(1)), 0, 0, CNum(0), CNum(0)}});
            }
            case Tok::X1: lex.advance(); return ExpPoly::x1();
            case Tok::X2: lex.advance(); return ExpPoly::x2();
            case Tok::LParen: {
                lex.advance();
                ExpPoly e = expr();
                expect(Tok::RParen, "')'");
                return e;
            }
            case Tok::Exp: {
                std::size_t at = lex.tok_pos;
                lex.advance();
                expect(Tok::LParen, "'('");
                ExpPoly arg = expr();
                expect(Tok::RParen, "')'");
                CNum c0, a, b;
                require_linear(arg, at, c0, a, b);
                ExpPoly e({EpTerm{CNum(Num(1)), 0, 0, a, b}});
                if (!c0.is_zero())
                    e = e.scaled(CNum::approx(std::exp(c0.to_complex())));
                return e;
            }
            case Tok::Cos:
            case Tok::Sin: {
                bool is_cos = lex.tok == Tok::Cos;
                std::size_t at = lex.tok_pos;
                lex.advance();
                expect(Tok::LParen, "'('");
                ExpPoly arg = expr();
                expect(Tok::RParen, "')'");
                CNum c0, a, b;
                require_linear(arg, at, c0, a, b);
                if (!c0.im.is_zero() || !a.im.is_zero() || !b.im.is_zero())
                    throw ParseError("cos/sin argument must be real", at);
                ExpPoly e = is_cos ? ExpPoly::cosine(a.re, b.re)
                                   : ExpPoly::sine(a.re, b.re);
                if (!c0.re.is_zero()) {
                    // cos(L+c0) = cos(c0)cos(L) - sin(c0)sin(L), same for sin.
                    double ph = c0.re.to_double();
                    ExpPoly c = ExpPoly::cosine(a.re, b.re);
                    ExpPoly s = ExpPoly::sine(a.re, b.re);
                    if (is_cos)
                        e = c.scaled(Num::approx(std::cos(ph))) -
                            s.scaled(Num::approx(std::sin(ph)));
                    else
                        e = s.scaled(Num::approx(std::cos(ph))) +
                            c.scaled(Num::approx(std::sin(ph)));
                }
                return e;
            }
            default:
                throw ParseError("expected a factor", lex.tok_pos);
        }
    }

    void expect(Tok t, const char* what) {
        if (lex.tok != t)
            throw ParseError(std::string("expected ") + what, lex.tok_pos);
        lex.advance();
    }
};

}  // namespace

ExpPoly ep_parse(const std::string& text, bool exact_mode) {
    Parser p(text, exact_mode);
    ExpPoly e = p.parse();
    if (!e.is_real_closed(1e-9))
        throw ParseError("expression is not real-valued", 0);
    return e;
}

}  // namespace afflab
