#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/integer/common_factor_rt.hpp>

#include "tplec/ilp.hpp"

namespace tplec {

namespace {

std::string coef_text(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return format_rational(r);
}

bool terminates(std::int64_t den) {
  while (den % 2 == 0) den /= 2;
  while (den % 5 == 0) den /= 5;
  return den == 1;
}

void write_term(std::ostream& out, bool first, const Rational& coef, const std::string& name) {
  const bool neg = coef < 0;
  const Rational mag = neg ? -coef : coef;
  if (first) {
    out << (neg ? "- " : "");
  } else {
    out << (neg ? "- " : "+ ");
  }
  if (mag != Rational(1)) out << coef_text(mag) << ' ';
  out << name;
}

}  // namespace

std::string export_lp(const IlpModel& m) {
  std::int64_t scale = 1;
  bool exact = true;
  for (const Rational& r : m.objective) {
    exact = exact && terminates(r.denominator());
    scale = boost::integer::lcm(scale, r.denominator());
  }
  if (exact) scale = 1;

  std::ostringstream out;
  if (scale != 1) out << "\\ objective scaled by " << scale << "\n";
  out << "Minimize\n obj:";
  bool first = true;
  int on_line = 0;
  for (std::size_t i = 0; i < m.variables.size(); ++i) {
    const Rational coef = m.objective[i] * scale;
    if (coef == Rational(0)) continue;
    if (on_line == 8) {
      out << "\n   ";
      on_line = 0;
    }
    out << ' ';
    write_term(out, first, coef, m.variables[i].name);
    first = false;
    ++on_line;
  }
  if (first) {
    out << " 0";
    if (!m.variables.empty()) out << ' ' << m.variables.front().name;
  }
  out << "\n";
  if (!m.constraints.empty()) {
    out << "Subject To\n";
    for (std::size_t k = 0; k < m.constraints.size(); ++k) {
      const IlpConstraint& c = m.constraints[k];
      out << " r" << k << ":";
      bool f = true;
      for (const IlpTerm& t : c.terms) {
        out << ' ';
        write_term(out, f, t.coef, m.variables[t.var].name);
        f = false;
      }
      if (f) out << " 0 " << (m.variables.empty() ? std::string("x") : m.variables.front().name);
      out << " <= " << c.rhs << "\n";
    }
  }
  if (!m.variables.empty()) {
    out << "Binaries\n";
    for (std::size_t i = 0; i < m.variables.size(); ++i) {
      out << ' ' << m.variables[i].name;
      if (i % 10 == 9 || i + 1 == m.variables.size()) out << "\n";
    }
  }
  out << "End\n";
  return out.str();
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

enum class Section { none, objective, constraints, binaries, end };

std::optional<Section> section_of(const std::string& line) {
  const std::string l = lower(line);
  if (l == "minimize" || l == "minimise" || l == "min") return Section::objective;
  if (l == "subject to" || l == "such that" || l == "st" || l == "s.t.") return Section::constraints;
  if (l == "binaries" || l == "binary" || l == "bin") return Section::binaries;
  if (l == "end") return Section::end;
  return std::nullopt;
}

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(cur);
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (c == '+' || c == '-') {
      flush();
      out.emplace_back(1, c);
    } else if (c == '<' || c == '>' || c == '=') {
      flush();
      std::string op(1, c);
      while (i + 1 < text.size() && (text[i + 1] == '<' || text[i + 1] == '>' || text[i + 1] == '=')) {
        op += text[++i];
      }
      out.push_back(op);
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

bool is_number(const std::string& t) {
  return !t.empty() && (std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '.');
}

struct RawTerm {
  Rational coef;
  std::string var;
};

// Parses "[+|-] [coef] var ..." starting at pos; stops at a relational operator.
std::vector<RawTerm> parse_terms(const std::vector<std::string>& toks, std::size_t& pos) {
  std::vector<RawTerm> terms;
  while (pos < toks.size()) {
    const std::string& t = toks[pos];
    if (t[0] == '<' || t[0] == '>' || t[0] == '=') break;
    Rational sign{1};
    while (pos < toks.size() && (toks[pos] == "+" || toks[pos] == "-")) {
      if (toks[pos] == "-") sign = -sign;
      ++pos;
    }
    if (pos >= toks.size()) throw std::invalid_argument("LP: dangling sign");
    Rational coef{1};
    if (is_number(toks[pos])) {
      coef = parse_rational(toks[pos]);
      ++pos;
    }
    if (pos >= toks.size() || is_number(toks[pos]) || toks[pos][0] == '<' || toks[pos][0] == '>' ||
        toks[pos][0] == '=') {
      throw std::invalid_argument("LP: expected a variable name");
    }
    terms.push_back({sign * coef, toks[pos]});
    ++pos;
  }
  return terms;
}

std::string strip_label(const std::string& text) {
  const auto colon = text.find(':');
  return colon == std::string::npos ? text : text.substr(colon + 1);
}

VarKind kind_of(const std::string& name) {
  if (name.rfind("ec_", 0) == 0) return VarKind::cut;
  if (name.rfind("c_", 0) == 0) return VarKind::conflict;
  if (name.rfind("s_", 0) == 0) return VarKind::stitch;
  return VarKind::color;
}

std::int64_t integral(const Rational& r) {
  if (r.denominator() != 1) throw std::invalid_argument("LP: constraint coefficients must be integers");
  return r.numerator();
}

}  // namespace

IlpModel read_lp(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  Section sec = Section::none;
  std::int64_t scale = 1;
  std::string objective_text;
  std::vector<std::string> constraint_texts;
  std::vector<std::string> binaries;
  std::string pending;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    trimmed.erase(trimmed.find_last_not_of(" \t") + 1);
    if (trimmed.empty()) continue;
    if (trimmed[0] == '\\') {
      const std::string tag = "\\ objective scaled by ";
      if (trimmed.rfind(tag, 0) == 0) scale = std::stoll(trimmed.substr(tag.size()));
      continue;
    }
    if (auto s = section_of(trimmed)) {
      sec = *s;
      continue;
    }
    switch (sec) {
      case Section::objective:
        objective_text += " " + trimmed;
        break;
      case Section::constraints: {
        pending += " " + trimmed;
        // A constraint is complete once it has an operator followed by a value.
        const auto toks = split_tokens(strip_label(pending));
        const auto op = std::find_if(toks.begin(), toks.end(),
                                     [](const std::string& t) { return t[0] == '<' || t[0] == '>' || t[0] == '='; });
        if (op != toks.end() && std::any_of(op + 1, toks.end(), is_number)) {
          constraint_texts.push_back(pending);
          pending.clear();
        }
        break;
      }
      case Section::binaries: {
        std::istringstream names(trimmed);
        std::string n;
        while (names >> n) binaries.push_back(n);
        break;
      }
      case Section::none:
      case Section::end:
        throw std::invalid_argument("LP: text outside a section: " + trimmed);
    }
  }
  if (!pending.empty()) throw std::invalid_argument("LP: unterminated constraint");

  IlpModel m;
  std::map<std::string, std::size_t> index;
  std::map<VarKind, std::size_t> per_kind;
  for (const std::string& n : binaries) {
    if (index.count(n)) throw std::invalid_argument("LP: duplicate binary " + n);
    index[n] = m.variables.size();
    const VarKind k = kind_of(n);
    m.variables.push_back({k, per_kind[k]++, n});
  }
  m.objective.assign(m.variables.size(), 0);
  auto var = [&](const std::string& n) {
    auto it = index.find(n);
    if (it == index.end()) throw std::invalid_argument("LP: undeclared variable " + n);
    return it->second;
  };

  {
    const auto toks = split_tokens(strip_label(objective_text));
    std::size_t pos = 0;
    if (!(toks.size() == 1 && toks[0] == "0")) {
      for (const RawTerm& t : parse_terms(toks, pos)) m.objective[var(t.var)] += t.coef / scale;
    }
  }
  for (const std::string& ct : constraint_texts) {
    const auto toks = split_tokens(strip_label(ct));
    std::size_t pos = 0;
    const auto raw = parse_terms(toks, pos);
    if (pos >= toks.size()) throw std::invalid_argument("LP: malformed constraint" + ct);
    const std::string op = toks[pos];
    std::size_t vpos = pos + 1;
    Rational sign{1};
    if (vpos < toks.size() && (toks[vpos] == "-" || toks[vpos] == "+")) {
      if (toks[vpos] == "-") sign = -1;
      ++vpos;
    }
    if (vpos + 1 != toks.size()) throw std::invalid_argument("LP: malformed constraint" + ct);
    const Rational rhs = sign * parse_rational(toks[vpos]);
    std::vector<IlpTerm> terms;
    for (const RawTerm& t : raw) {
      if (t.coef != Rational(0)) terms.push_back({var(t.var), integral(t.coef)});
    }
    auto negated = [](std::vector<IlpTerm> ts) {
      for (auto& t : ts) t.coef = -t.coef;
      return ts;
    };
    if (op == "<=" || op == "=<" || op == "<") {
      m.constraints.push_back({terms, integral(rhs)});
    } else if (op == ">=" || op == "=>" || op == ">") {
      m.constraints.push_back({negated(terms), -integral(rhs)});
    } else if (op == "=") {
      m.constraints.push_back({terms, integral(rhs)});
      m.constraints.push_back({negated(terms), -integral(rhs)});
    } else {
      throw std::invalid_argument("LP: unknown operator " + op);
    }
  }
  return m;
}

}  // namespace tplec
