#include "dstk/hierarchy.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "dstk/errors.hpp"

namespace dstk {

namespace {
std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw parse_error("not a natural number: '" + std::string(s) + "'");
  }
  return v;
}
}  // namespace

OrdinalExpr OrdinalExpr::finite(std::uint64_t n) {
  OrdinalExpr o;
  o.n = n;
  return o;
}

OrdinalExpr OrdinalExpr::omega(std::vector<std::uint64_t> lead, std::uint64_t repeat) {
  if (repeat == 0 || std::find(lead.begin(), lead.end(), 0) != lead.end()) {
    throw precondition_error("fundamental sequence entries must be nonzero");
  }
  OrdinalExpr o;
  o.is_limit = true;
  o.lead = std::move(lead);
  o.repeat = repeat;
  return o;
}

OrdinalExpr OrdinalExpr::parse(std::string_view text) {
  if (text == "omega") return omega();
  if (text.rfind("omega:", 0) == 0) {
    std::vector<std::uint64_t> terms;
    std::string_view rest = text.substr(6);
    while (true) {
      const auto comma = rest.find(',');
      terms.push_back(parse_u64(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    const std::uint64_t last = terms.back();
    terms.pop_back();
    return omega(std::move(terms), last);
  }
  return finite(parse_u64(text));
}

std::uint64_t OrdinalExpr::term(std::uint64_t k) const { return k < lead.size() ? lead[k] : repeat; }

std::string OrdinalExpr::str() const {
  if (!is_limit) return std::to_string(n);
  std::string s = "omega:";
  for (auto t : lead) s += std::to_string(t) + ",";
  return s + std::to_string(repeat);
}

CertifiedSeq::CertifiedSeq(EvConstSeq s, std::uint64_t n) : seq(std::move(s)), cert(n) {
  if (cert < seq.prefix().size()) throw precondition_error("certificate below the canonical prefix length");
}

CertifiedSeq::CertifiedSeq(EvConstSeq s) : seq(std::move(s)), cert(seq.prefix().size()) {}

int rho0_coordinate(const CertifiedSeq& e, std::uint64_t i) {
  // positions >= cert carry the tail, and <i, j> is unbounded in j
  if (e.seq.tail() == 1) return 0;
  for (std::uint64_t j = 0;; ++j) {
    const std::uint64_t pos = pair(i, j);
    if (pos >= e.cert) return 1;
    if (e.seq.at(pos)) return 0;
  }
}

CertifiedSeq rho0(const CertifiedSeq& e) {
  std::uint64_t n2 = 0;
  while (triangular(n2) <= e.cert) ++n2;
  Word w;
  for (std::uint64_t i = 0; i < n2; ++i) w.push_back(rho0_coordinate(e, i));
  CertifiedSeq out(EvConstSeq(w, 1 - e.seq.tail()), n2);
  for (std::uint64_t i = n2; i < n2 + 64; ++i) {
    if (rho0_coordinate(e, i) != out.seq.tail()) throw std::logic_error("rho0 certificate spot check failed");
  }
  return out;
}

namespace {
CertifiedSeq rho0_finite(std::uint64_t k, CertifiedSeq e) {
  for (std::uint64_t step = 0; step < k; ++step) {
    if (e.seq.prefix().empty()) {
      // c^inf -> (1-c)^inf, so only the parity of the remaining steps matters
      const int c = e.seq.tail() ^ static_cast<int>((k - step) & 1U);
      return CertifiedSeq(EvConstSeq::constant(c), 0);
    }
    e = rho0(e);
  }
  return e;
}

CertifiedSeq rho0_limit(const OrdinalExpr& xi, const CertifiedSeq& e, const RhoOptions& opts) {
  CertifiedSeq cur = e;
  Word out;
  for (std::uint64_t k = 0; k < opts.max_stages; ++k) {
    const std::uint64_t keep = std::min<std::uint64_t>(k, cur.seq.prefix().size());
    const CertifiedSeq shifted(EvConstSeq(cur.seq.prefix().drop(static_cast<std::size_t>(keep)), cur.seq.tail()),
                               cur.cert > k ? cur.cert - k : 0);
    const CertifiedSeq img = rho0_finite(xi.term(k), shifted);
    out.push_back(img.seq.at(0));
    cur = CertifiedSeq(EvConstSeq(cur.seq.take(k) + img.seq.prefix(), img.seq.tail()), k + img.cert);

    // From stage k+1 on the shifted input is constant; with constant terms from here,
    // each stage flips it iff the term is odd.
    if (cur.seq.prefix().size() <= k + 1 && k + 1 >= xi.lead.size()) {
      if (xi.repeat % 2 == 0) {
        const int c = cur.seq.tail();
        return CertifiedSeq(EvConstSeq(out, c), k + 1);
      }
      throw certificate_unavailable("rho0^" + xi.str() + " output alternates from coordinate " +
                                    std::to_string(k + 1) + " on; not eventually constant");
    }
  }
  throw certificate_unavailable("rho0^" + xi.str() + ": no stability after " + std::to_string(opts.max_stages) +
                                " stages");
}
}  // namespace

CertifiedSeq rho0_pow(const OrdinalExpr& xi, const CertifiedSeq& e, const RhoOptions& opts) {
  if (!xi.is_limit) return rho0_finite(xi.n, e);
  return rho0_limit(xi, e, opts);
}

bool h_member(const OrdinalExpr& xi, const CertifiedSeq& e, const RhoOptions& opts) {
  return rho0_pow(xi, e, opts).seq == EvConstSeq::constant(0);
}

bool s_member(const OrdinalExpr& xi, const EvConstSeq& alpha, const EvConstSeq& beta, const Test& test,
              const RhoOptions& opts) {
  if (!branch_member(alpha, beta, test)) return false;
  return !h_member(xi, CertifiedSeq(shift(symdiff(alpha, beta))), opts);
}

CertifiedSeq rho0_sparse(const SparseSeq& x) {
  if (x.tail == 1) return CertifiedSeq(EvConstSeq::constant(0), 0);
  constexpr std::uint64_t kMaxIndex = std::uint64_t{1} << 20;
  std::vector<std::uint64_t> zeros;
  for (const Nat& e : x.exceptions) {
    auto d = e.unpair();
    if (!d) throw certificate_unavailable("cannot decode position " + e.str());
    auto i = d->first.to_u64();
    if (!i || *i > kMaxIndex) throw resource_limit("decoded index too large: " + d->first.str());
    zeros.push_back(*i);
  }
  const std::uint64_t len = zeros.empty() ? 0 : *std::max_element(zeros.begin(), zeros.end()) + 1;
  std::string bits(static_cast<std::size_t>(len), '1');
  for (auto i : zeros) bits[static_cast<std::size_t>(i)] = '0';
  return CertifiedSeq(EvConstSeq(Word(bits), 1), len);
}

}  // namespace dstk
