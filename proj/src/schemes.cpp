#include "cxsplit/schemes.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace cxsplit {
namespace {

struct Item {
  StageRole role;
  Complex value;
};

bool counts_fit(const Scheme& s) {
  const auto na = s.a.size();
  const auto nb = s.b.size();
  const bool bab = s.pattern == Pattern::BAB;
  const auto lead = bab ? nb : na;
  const auto other = bab ? na : nb;
  if (s.symmetric) return lead == other || lead == other + 1;
  return lead == other + 1;
}

// The stored coefficients in interleaving order (half sequence if symmetric).
std::vector<Item> stored_interleaving(const Scheme& s) {
  if (!counts_fit(s)) {
    throw ValidationError("interleaving",
                          "coefficient counts do not fit the " +
                              std::string(s.pattern == Pattern::BAB ? "BAB" : "ABA") +
                              " pattern");
  }
  std::vector<Item> out;
  const bool b_first = s.pattern == Pattern::BAB;
  std::size_t ia = 0, ib = 0;
  bool take_b = b_first;
  while (ia < s.a.size() || ib < s.b.size()) {
    if (take_b) {
      out.push_back({StageRole::BKick, s.b[ib++]});
    } else {
      out.push_back({StageRole::AFlow, s.a[ia++]});
    }
    take_b = !take_b;
  }
  return out;
}

std::vector<Item> full_interleaving(const Scheme& s) {
  auto seq = stored_interleaving(s);
  if (s.symmetric && seq.size() > 1) {
    for (auto i = static_cast<std::ptrdiff_t>(seq.size()) - 2; i >= 0; --i) {
      seq.push_back(seq[static_cast<std::size_t>(i)]);
    }
  }
  return seq;
}

std::vector<Complex> extract(const std::vector<Item>& seq, StageRole role) {
  std::vector<Complex> out;
  for (const auto& it : seq) {
    if (it.role == role) out.push_back(it.value);
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ParseError(line, "not a number: '" + std::string(tok) + "'");
  }
  return v;
}

int parse_int(std::string_view tok, std::size_t line) {
  int v = 0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, "not an integer: '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const auto start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::vector<Complex> Scheme::full_a() const {
  return extract(full_interleaving(*this), StageRole::AFlow);
}

std::vector<Complex> Scheme::full_b() const {
  return extract(full_interleaving(*this), StageRole::BKick);
}

std::vector<std::string> builtin_names() {
  return {"Strang_BAB", "Strang_ABA", "S62", "SM4", "SM64"};
}

Scheme builtin_scheme(std::string_view name) {
  Scheme s;
  s.name = std::string(name);
  s.symmetric = true;
  if (name == "Strang_BAB") {
    s.pattern = Pattern::BAB;
    s.a = {1.0};
    s.b = {0.5};
    s.claimed_order = 2;
  } else if (name == "Strang_ABA") {
    s.pattern = Pattern::ABA;
    s.a = {0.5};
    s.b = {1.0};
    s.claimed_order = 2;
  } else if (name == "S62") {
    const double r5 = std::sqrt(5.0);
    s.pattern = Pattern::BAB;
    s.a = {(5.0 - r5) / 10.0, 1.0 / r5};
    s.b = {1.0 / 12.0, 5.0 / 12.0};
    s.claimed_order = 2;
    s.effective_order = std::pair{6, 2};
  } else if (name == "SM4") {
    s.pattern = Pattern::BAB;
    s.a = {0.13505265889288437, 0.36494734110711563};
    s.b = {{0.018329102861074364, -0.10677008344599524},
           {0.2784394345454581, 0.20041452008768607},
           {0.40646292518693505, -0.18728887328338165}};
    s.claimed_order = 4;
  } else if (name == "SM64") {
    s.pattern = Pattern::BAB;
    s.a = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    s.b = {{0.05753968253968254, -0.007886748775536424},
           {0.20476190476190473, 0.04732049265321855},
           {0.16309523809523818, -0.11830123163304637},
           {0.14920634920634912, 0.15773497551072851}};
    s.claimed_order = 4;
  } else {
    throw NotInCatalog(std::string(name));
  }
  return s;
}

StageSequence expand(const Scheme& scheme) {
  StageSequence seq;
  Complex c = 0.0;
  for (const auto& it : full_interleaving(scheme)) {
    seq.push_back({it.role, it.value, c});
    if (it.role == StageRole::AFlow) c += it.value;
  }
  return seq;
}

Scheme conjugate(const Scheme& scheme) {
  Scheme out = scheme;
  for (auto& x : out.a) x = std::conj(x);
  for (auto& x : out.b) x = std::conj(x);
  return out;
}

StageSequence conjugate(const StageSequence& seq) {
  StageSequence out = seq;
  for (auto& st : out) {
    st.coeff = std::conj(st.coeff);
    st.node = std::conj(st.node);
  }
  return out;
}

SchemeReport validate_scheme(const Scheme& scheme) {
  SchemeReport r;
  std::vector<Item> seq;
  try {
    seq = full_interleaving(scheme);
  } catch (const ValidationError&) {
    r.symmetry_defect = INFINITY;
    r.sum_a = r.sum_b = NAN;
    r.min_re_a = r.min_re_b = NAN;
    return r;
  }
  r.min_re_a = INFINITY;
  r.min_re_b = INFINITY;
  for (const auto& it : seq) {
    if (it.role == StageRole::AFlow) {
      r.sum_a += it.value;
      r.min_re_a = std::min(r.min_re_a, it.value.real());
      r.max_abs_im_a = std::max(r.max_abs_im_a, std::abs(it.value.imag()));
    } else {
      r.sum_b += it.value;
      r.min_re_b = std::min(r.min_re_b, it.value.real());
    }
  }
  for (std::size_t i = 0, j = seq.size(); i < seq.size(); ++i) {
    --j;
    const double d = seq[i].role == seq[j].role ? std::abs(seq[i].value - seq[j].value)
                                                : INFINITY;
    r.symmetry_defect = std::max(r.symmetry_defect, d);
  }
  return r;
}

void check_scheme(const Scheme& scheme, double tol) {
  if (!counts_fit(scheme)) {
    throw ValidationError("interleaving", "coefficient counts do not fit the pattern");
  }
  const auto r = validate_scheme(scheme);
  const auto ca = r.consistency_a();
  const auto cb = r.consistency_b();
  if (std::abs(ca.real()) > tol || std::abs(ca.imag()) > tol) {
    throw ValidationError("consistency-a", "sum of a minus 1 = (" + format_double(ca.real()) +
                                               ", " + format_double(ca.imag()) + ")");
  }
  if (std::abs(cb.real()) > tol || std::abs(cb.imag()) > tol) {
    throw ValidationError("consistency-b", "sum of b minus 1 = (" + format_double(cb.real()) +
                                               ", " + format_double(cb.imag()) + ")");
  }
  if (scheme.symmetric && r.symmetry_defect > tol) {
    throw ValidationError("symmetry", "defect " + format_double(r.symmetry_defect));
  }
  if (!(r.min_re_a > 0.0) || r.max_abs_im_a > tol) {
    throw ValidationError("stability-a", "a-coefficients must be real and positive");
  }
  if (r.min_re_b < -tol) {
    throw ValidationError("stability-b", "min Re(b) = " + format_double(r.min_re_b));
  }
}

Scheme load_scheme(std::string_view text) {
  Scheme s;
  s.name = "loaded";
  bool have_pattern = false, have_order = false, have_symmetric = false;
  std::vector<Item> items;
  std::size_t line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    auto line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (const auto eq = line.find('='); eq != std::string_view::npos) {
      const auto key = trim(line.substr(0, eq));
      const auto val = trim(line.substr(eq + 1));
      if (key == "name") {
        if (val.empty()) throw ParseError(line_no, "empty name");
        s.name = std::string(val);
      } else if (key == "pattern") {
        if (val == "BAB") {
          s.pattern = Pattern::BAB;
        } else if (val == "ABA") {
          s.pattern = Pattern::ABA;
        } else {
          throw ParseError(line_no, "pattern must be BAB or ABA");
        }
        have_pattern = true;
      } else if (key == "order") {
        s.claimed_order = parse_int(val, line_no);
        have_order = true;
      } else if (key == "symmetric") {
        if (val == "true") {
          s.symmetric = true;
        } else if (val == "false") {
          s.symmetric = false;
        } else {
          throw ParseError(line_no, "symmetric must be true or false");
        }
        have_symmetric = true;
      } else if (key == "effective_order") {
        const auto comma = val.find(',');
        if (comma == std::string_view::npos) {
          throw ParseError(line_no, "effective_order must be <int>,<int>");
        }
        s.effective_order = std::pair{parse_int(trim(val.substr(0, comma)), line_no),
                                      parse_int(trim(val.substr(comma + 1)), line_no)};
      } else {
        throw ParseError(line_no, "unknown header '" + std::string(key) + "'");
      }
      continue;
    }

    const auto tok = split_ws(line);
    if (tok.size() != 3 || (tok[0] != "a" && tok[0] != "b")) {
      throw ParseError(line_no, "expected 'a <re> <im>' or 'b <re> <im>'");
    }
    const Complex v{parse_double(tok[1], line_no), parse_double(tok[2], line_no)};
    items.push_back({tok[0] == "a" ? StageRole::AFlow : StageRole::BKick, v});
  }

  if (!have_pattern) throw ParseError(line_no, "missing header 'pattern'");
  if (!have_order) throw ParseError(line_no, "missing header 'order'");
  if (!have_symmetric) throw ParseError(line_no, "missing header 'symmetric'");
  if (items.empty()) throw ParseError(line_no, "no coefficient lines");

  const auto lead = s.pattern == Pattern::BAB ? StageRole::BKick : StageRole::AFlow;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const bool expect_lead = i % 2 == 0;
    if ((items[i].role == lead) != expect_lead) {
      throw ValidationError("interleaving", "coefficient " + std::to_string(i + 1) +
                                                " breaks the alternating pattern");
    }
    (items[i].role == StageRole::AFlow ? s.a : s.b).push_back(items[i].value);
  }
  check_scheme(s, kLoadedTolerance);
  return s;
}

std::string serialize_scheme(const Scheme& scheme) {
  std::ostringstream os;
  os << "name=" << scheme.name << '\n';
  os << "pattern=" << (scheme.pattern == Pattern::BAB ? "BAB" : "ABA") << '\n';
  os << "order=" << scheme.claimed_order << '\n';
  os << "symmetric=" << (scheme.symmetric ? "true" : "false") << '\n';
  if (scheme.effective_order) {
    os << "effective_order=" << scheme.effective_order->first << ','
       << scheme.effective_order->second << '\n';
  }
  for (const auto& it : stored_interleaving(scheme)) {
    os << (it.role == StageRole::AFlow ? 'a' : 'b') << ' ' << format_double(it.value.real())
       << ' ' << format_double(it.value.imag()) << '\n';
  }
  return os.str();
}

}  // namespace cxsplit
