#include "dimlab/dyadic.hpp"

#include <stdexcept>

namespace dimlab {

namespace {

mpz_class pow2(std::int64_t e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return r;
}

}  // namespace

DyadicPoint::DyadicPoint(mpz_class mantissa, std::int64_t depth)
    : mantissa_(std::move(mantissa)), depth_(depth) {
  if (depth_ < 0) throw std::invalid_argument("DyadicPoint: depth must be >= 0");
  if (mantissa_ < 0) throw std::invalid_argument("DyadicPoint: mantissa must be >= 0");
  if (mpz_sizeinbase(mantissa_.get_mpz_t(), 2) > static_cast<std::size_t>(depth_) &&
      mantissa_ != 0)
    throw std::invalid_argument("DyadicPoint: mantissa must be < 2^depth");
}

int DyadicPoint::digit(std::int64_t k) const {
  if (k < 1) throw std::invalid_argument("DyadicPoint: digits are 1-indexed");
  if (k > depth_) return 0;
  return mpz_tstbit(mantissa_.get_mpz_t(), static_cast<mp_bitcnt_t>(depth_ - k));
}

mpq_class DyadicPoint::as_mpq() const {
  mpq_class q(mantissa_, pow2(depth_));
  q.canonicalize();
  return q;
}

std::string DyadicPoint::to_digit_string() const {
  std::string s = "0.";
  s.reserve(static_cast<std::size_t>(depth_) + 2);
  for (std::int64_t k = 1; k <= depth_; ++k) s.push_back(digit(k) ? '1' : '0');
  return s;
}

std::string DyadicPoint::to_hex_string() const {
  return "0x" + mantissa_.get_str(16) + "/" + std::to_string(depth_);
}

DyadicPoint DyadicPoint::parse(const std::string& text) {
  if (text.rfind("0x", 0) == 0) {
    auto slash = text.find('/');
    if (slash == std::string::npos)
      throw std::invalid_argument("DyadicPoint: hex form must be 0x<mantissa>/<depth>");
    mpz_class m;
    if (mpz_set_str(m.get_mpz_t(), text.substr(2, slash - 2).c_str(), 16) != 0)
      throw std::invalid_argument("DyadicPoint: bad hex mantissa in '" + text + "'");
    std::int64_t d = std::stoll(text.substr(slash + 1));
    return DyadicPoint(std::move(m), d);
  }
  std::size_t i = 0;
  if (i < text.size() && text[i] == '0') ++i;
  if (i < text.size() && text[i] == '.') ++i;
  else if (i != text.size())
    throw std::invalid_argument("DyadicPoint: expected '0.<digits>' in '" + text + "'");
  mpz_class m = 0;
  std::int64_t d = 0;
  for (; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1')
      throw std::invalid_argument("DyadicPoint: non-binary digit in '" + text + "'");
    m <<= 1;
    if (text[i] == '1') m |= 1;
    ++d;
  }
  return DyadicPoint(std::move(m), d);
}

std::strong_ordering operator<=>(const DyadicPoint& x, const DyadicPoint& y) {
  // Compare x.m / 2^x.d with y.m / 2^y.d by cross-shifting to a common depth.
  std::int64_t d = std::max(x.depth_, y.depth_);
  mpz_class xm = x.mantissa_ << static_cast<unsigned long>(d - x.depth_);
  mpz_class ym = y.mantissa_ << static_cast<unsigned long>(d - y.depth_);
  int c = cmp(xm, ym);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool operator==(const DyadicPoint& x, const DyadicPoint& y) {
  return (x <=> y) == std::strong_ordering::equal;
}

ExactDistance::ExactDistance(mpz_class num, std::int64_t depth)
    : num_(std::move(num)), depth_(depth) {
  if (depth_ < 0) throw std::invalid_argument("ExactDistance: depth must be >= 0");
  if (num_ < 0) throw std::invalid_argument("ExactDistance: numerator must be >= 0");
  mpz_class half = depth_ == 0 ? mpz_class(1) : pow2(depth_ - 1);
  if (num_ > half) throw std::invalid_argument("ExactDistance: value exceeds 1/2");
}

mpq_class ExactDistance::as_mpq() const {
  mpq_class q(num_, pow2(depth_));
  q.canonicalize();
  return q;
}

int ExactDistance::cmp_pow2(std::int64_t m) const {
  if (m < 0) throw std::invalid_argument("ExactDistance: cmp_pow2 wants m >= 0");
  // num / 2^depth  vs  1 / 2^m   <=>   num * 2^m  vs  2^depth
  mpz_class lhs = num_ << static_cast<unsigned long>(m);
  return cmp(lhs, pow2(depth_));
}

std::optional<std::int64_t> ExactDistance::log2_upper_bound() const {
  if (num_ == 0) return std::nullopt;
  auto bits = static_cast<std::int64_t>(mpz_sizeinbase(num_.get_mpz_t(), 2));
  return bits - depth_;
}

std::strong_ordering operator<=>(const ExactDistance& x, const ExactDistance& y) {
  std::int64_t d = std::max(x.depth_, y.depth_);
  mpz_class xn = x.num_ << static_cast<unsigned long>(d - x.depth_);
  mpz_class yn = y.num_ << static_cast<unsigned long>(d - y.depth_);
  int c = cmp(xn, yn);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool operator==(const ExactDistance& x, const ExactDistance& y) {
  return (x <=> y) == std::strong_ordering::equal;
}

DyadicPoint shift_mod1(const DyadicPoint& x, std::int64_t n) {
  if (n < 0) throw std::invalid_argument("shift_mod1: n must be >= 0");
  if (n >= x.depth()) return DyadicPoint();
  std::int64_t d = x.depth() - n;
  mpz_class m;
  mpz_fdiv_r_2exp(m.get_mpz_t(), x.mantissa().get_mpz_t(), static_cast<mp_bitcnt_t>(d));
  return DyadicPoint(std::move(m), d);
}

DyadicPoint dilate_mod1(const mpz_class& h, const DyadicPoint& x) {
  if (h <= 0) throw std::invalid_argument("dilate_mod1: h must be a positive integer");
  mpz_class m = h * x.mantissa();
  mpz_fdiv_r_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(x.depth()));
  return DyadicPoint(std::move(m), x.depth());
}

DyadicPoint dilate_mod1(std::uint64_t h, const DyadicPoint& x) {
  return dilate_mod1(mpz_class(h), x);
}

DyadicPoint add_mod1(const DyadicPoint& x, const DyadicPoint& y) {
  std::int64_t d = std::max(x.depth(), y.depth());
  mpz_class m = (x.mantissa() << static_cast<unsigned long>(d - x.depth())) +
                (y.mantissa() << static_cast<unsigned long>(d - y.depth()));
  mpz_fdiv_r_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(d));
  return DyadicPoint(std::move(m), d);
}

ExactDistance dist_nearest_int(const DyadicPoint& x) {
  if (x.is_zero()) return ExactDistance();
  mpz_class up = pow2(x.depth()) - x.mantissa();  // 1 - x, scaled
  return ExactDistance(std::min(x.mantissa(), up), x.depth());
}

}  // namespace dimlab
