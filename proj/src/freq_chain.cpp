#include "coldnav/freq_chain.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace coldnav::freq_chain {

namespace {

struct Token {
  std::string text;
  int column = 0;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    tokens.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
  }
  return tokens;
}

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

[[noreturn]] void fail(int line, int col, const std::string& msg) {
  throw ParseError(line, col, msg);
}

MilliHz parse_frequency_at(std::string_view text, int line, int col) {
  try {
    return parse_frequency(text);
  } catch (const std::invalid_argument& e) {
    fail(line, col, e.what());
  }
}

}  // namespace

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ":" + std::to_string(column) + ": " +
                         message),
      line_(line),
      column_(column) {}

MilliHz parse_frequency(std::string_view text) {
  std::string_view rest = text;
  bool negative = false;
  if (!rest.empty() && (rest[0] == '+' || rest[0] == '-')) {
    negative = rest[0] == '-';
    rest.remove_prefix(1);
  }

  std::size_t pos = 0;
  while (pos < rest.size() && std::isdigit(static_cast<unsigned char>(rest[pos]))) ++pos;
  const std::string_view int_digits = rest.substr(0, pos);

  std::string_view frac_digits;
  if (pos < rest.size() && rest[pos] == '.') {
    std::size_t fstart = ++pos;
    while (pos < rest.size() && std::isdigit(static_cast<unsigned char>(rest[pos]))) ++pos;
    frac_digits = rest.substr(fstart, pos - fstart);
    if (frac_digits.empty()) {
      throw std::invalid_argument("malformed frequency literal '" + std::string(text) + "'");
    }
  }
  if (int_digits.empty()) {
    throw std::invalid_argument("malformed frequency literal '" + std::string(text) + "'");
  }

  const std::string_view suffix = rest.substr(pos);
  // Millihertz per unit; matching is case-sensitive (MHz != mHz, which is
  // below the resolution of the representation and not accepted).
  MilliHz scale = 0;
  if (suffix == "Hz") scale = 1000LL;
  else if (suffix == "kHz") scale = khz;
  else if (suffix == "MHz") scale = mhz;
  else if (suffix == "GHz") scale = ghz;
  else if (suffix == "THz") scale = ghz * 1000LL;
  else {
    throw std::invalid_argument("malformed frequency literal '" + std::string(text) +
                                "' (expected a Hz/kHz/MHz/GHz/THz suffix)");
  }

  unsigned long long int_part = 0;
  const auto ic = std::from_chars(int_digits.data(), int_digits.data() + int_digits.size(),
                                  int_part);
  if (ic.ec != std::errc()) {
    throw std::invalid_argument("malformed frequency literal '" + std::string(text) + "'");
  }

  __int128 value = static_cast<__int128>(int_part) * scale;
  if (!frac_digits.empty()) {
    unsigned long long frac = 0;
    const auto fc = std::from_chars(frac_digits.data(), frac_digits.data() + frac_digits.size(),
                                    frac);
    if (fc.ec != std::errc()) {
      throw std::invalid_argument("malformed frequency literal '" + std::string(text) + "'");
    }
    __int128 denom = 1;
    for (std::size_t i = 0; i < frac_digits.size(); ++i) denom *= 10;
    const __int128 num = static_cast<__int128>(frac) * scale;
    if (num % denom != 0) {
      throw std::invalid_argument("frequency literal '" + std::string(text) +
                                  "' is finer than 1 mHz");
    }
    value += num / denom;
  }

  if (value > std::numeric_limits<MilliHz>::max()) {
    throw std::invalid_argument("frequency literal '" + std::string(text) + "' overflows");
  }
  return negative ? -static_cast<MilliHz>(value) : static_cast<MilliHz>(value);
}

std::string format_frequency(MilliHz value) {
  const bool neg = value < 0;
  unsigned long long v = neg ? static_cast<unsigned long long>(-(value + 1)) + 1ULL
                             : static_cast<unsigned long long>(value);
  struct Unit { unsigned long long scale; const char* name; };
  // Millihertz per unit.
  static constexpr Unit units[] = {
      {static_cast<unsigned long long>(ghz) * 1000ULL, "THz"},
      {static_cast<unsigned long long>(ghz), "GHz"},
      {static_cast<unsigned long long>(mhz), "MHz"},
      {static_cast<unsigned long long>(khz), "kHz"},
      {1000ULL, "Hz"},
  };
  const Unit* unit = &units[4];
  for (const Unit& u : units) {
    if (v >= u.scale) {
      unit = &u;
      break;
    }
  }
  std::ostringstream out;
  if (neg) out << '-';
  out << v / unit->scale;
  unsigned long long rem = v % unit->scale;
  if (rem != 0) {
    std::string frac = std::to_string(rem);
    frac.insert(0, std::to_string(unit->scale).size() - 1 - frac.size(), '0');
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    out << '.' << frac;
  }
  out << unit->name;
  return out.str();
}

bool FreqSet::contains(MilliHz f) const {
  return std::binary_search(components.begin(), components.end(), f);
}

namespace {

struct LineContext {
  int line;
  const std::vector<Token>& tokens;
  const std::map<std::string, int>& defined;  // id -> defining line

  const Token& arg(std::size_t index, const char* what) const {
    if (index >= tokens.size()) {
      fail(line, tokens.empty() ? 1 : tokens.back().column, std::string("missing ") + what);
    }
    return tokens[index];
  }

  std::string input_ref(std::size_t index) const {
    const Token& tok = arg(index, "input reference");
    if (!defined.count(tok.text)) {
      fail(line, tok.column, "reference to undefined id '" + tok.text + "'");
    }
    return tok.text;
  }

  MilliHz freq(std::size_t index) const {
    const Token& tok = arg(index, "frequency");
    return parse_frequency_at(tok.text, line, tok.column);
  }

  void no_extra(std::size_t count) const {
    if (tokens.size() > count) {
      fail(line, tokens[count].column, "unexpected token '" + tokens[count].text + "'");
    }
  }
};

std::vector<int> parse_orders(const Token& tok, int line) {
  constexpr std::string_view prefix = "orders=";
  if (tok.text.rfind(prefix, 0) != 0) {
    fail(line, tok.column, "expected orders=<k,k,...>");
  }
  std::vector<int> orders;
  std::string_view list = std::string_view(tok.text).substr(prefix.size());
  while (!list.empty()) {
    const std::size_t comma = list.find(',');
    const std::string_view item = list.substr(0, comma);
    int value = 0;
    const char* begin = item.data();
    const char* end = item.data() + item.size();
    if (begin != end && *begin == '+') ++begin;
    const auto rc = std::from_chars(begin, end, value);
    if (rc.ec != std::errc() || rc.ptr != end || item.empty()) {
      fail(line, tok.column, "malformed sideband order '" + std::string(item) + "'");
    }
    orders.push_back(value);
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  if (orders.empty()) fail(line, tok.column, "sideband needs at least one order");
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  return orders;
}

}  // namespace

FreqChain parse_chain(std::string_view text) {
  FreqChain chain;
  std::map<std::string, int> defined;
  std::vector<std::pair<Token, int>> pending_check_ids;

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t eol = text.find('\n', start);
    const std::string_view raw =
        text.substr(start, eol == std::string_view::npos ? std::string_view::npos : eol - start);
    start = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::vector<Token> tokens = tokenize(raw);
    if (tokens.empty()) continue;
    const LineContext ctx{line_no, tokens, defined};
    const std::string& kind = tokens[0].text;

    if (kind == "check") {
      const Token& id = ctx.arg(1, "node id");
      const MilliHz expected = ctx.freq(2);
      const Token& tol_tok = ctx.arg(3, "tol=<freq>");
      constexpr std::string_view prefix = "tol=";
      if (tol_tok.text.rfind(prefix, 0) != 0) {
        fail(line_no, tol_tok.column, "expected tol=<freq>");
      }
      const MilliHz tol =
          parse_frequency_at(tol_tok.text.substr(prefix.size()), line_no, tol_tok.column);
      if (tol < 0) fail(line_no, tol_tok.column, "tolerance must be >= 0");
      if (expected < 0) fail(line_no, tokens[2].column, "expected frequency must be >= 0");
      ctx.no_extra(4);
      chain.checks.push_back({id.text, expected, tol, line_no});
      pending_check_ids.push_back({id, line_no});
      continue;
    }

    const Token& id_tok = ctx.arg(1, "node id");
    if (!valid_identifier(id_tok.text)) {
      fail(line_no, id_tok.column, "invalid id '" + id_tok.text + "'");
    }
    if (auto it = defined.find(id_tok.text); it != defined.end()) {
      fail(line_no, id_tok.column,
           "duplicate id '" + id_tok.text + "' (first defined at line " +
               std::to_string(it->second) + ")");
    }

    NodeOp op;
    if (kind == "source" || kind == "vco") {
      const MilliHz f = ctx.freq(2);
      if (f < 0) fail(line_no, tokens[2].column, "source frequency must be >= 0");
      ctx.no_extra(3);
      if (kind == "source") op = SourceNode{f};
      else op = VcoNode{f};
    } else if (kind == "double") {
      op = DoubleNode{ctx.input_ref(2)};
      ctx.no_extra(3);
    } else if (kind == "shift") {
      std::string in = ctx.input_ref(2);
      op = ShiftNode{std::move(in), ctx.freq(3)};
      ctx.no_extra(4);
    } else if (kind == "sideband") {
      std::string in = ctx.input_ref(2);
      const MilliHz offset = ctx.freq(3);
      if (offset < 0) fail(line_no, tokens[3].column, "sideband offset must be >= 0");
      op = SidebandNode{std::move(in), offset, parse_orders(ctx.arg(4, "orders=<k,...>"), line_no)};
      ctx.no_extra(5);
    } else if (kind == "beat") {
      std::string in1 = ctx.input_ref(2);
      op = BeatNode{std::move(in1), ctx.input_ref(3)};
      ctx.no_extra(4);
    } else if (kind == "mix") {
      std::string in1 = ctx.input_ref(2);
      op = MixNode{std::move(in1), ctx.input_ref(3)};
      ctx.no_extra(4);
    } else if (kind == "lowpass") {
      std::string in = ctx.input_ref(2);
      const MilliHz cutoff = ctx.freq(3);
      if (cutoff <= 0) fail(line_no, tokens[3].column, "lowpass cutoff must be > 0");
      op = LowPassNode{std::move(in), cutoff};
      ctx.no_extra(4);
    } else if (kind == "divide") {
      std::string in = ctx.input_ref(2);
      const Token& n_tok = ctx.arg(3, "divisor");
      long long n = 0;
      const auto rc = std::from_chars(n_tok.text.data(), n_tok.text.data() + n_tok.text.size(), n);
      if (rc.ec != std::errc() || rc.ptr != n_tok.text.data() + n_tok.text.size() || n < 1) {
        fail(line_no, n_tok.column, "divisor must be a positive integer");
      }
      op = DivideNode{std::move(in), n};
      ctx.no_extra(4);
    } else {
      fail(line_no, tokens[0].column, "unknown node kind '" + kind + "'");
    }

    defined[id_tok.text] = line_no;
    chain.nodes.push_back({id_tok.text, std::move(op), line_no});
  }

  for (const auto& [tok, line] : pending_check_ids) {
    if (!defined.count(tok.text)) {
      fail(line, tok.column, "check references unknown id '" + tok.text + "'");
    }
  }
  return chain;
}

FreqChain parse_chain_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open chain file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_chain(buf.str());
}

namespace {

FreqSet make_set(std::set<MilliHz>&& values, const std::string& node_id) {
  if (values.size() > max_components) {
    throw EvalError("node '" + node_id + "': component set exceeds " +
                    std::to_string(max_components) + " entries");
  }
  FreqSet out;
  out.components.assign(values.begin(), values.end());
  return out;
}

MilliHz clamp_non_negative(MilliHz f) { return f < 0 ? 0 : f; }

}  // namespace

std::map<std::string, FreqSet> evaluate(const FreqChain& chain) {
  std::map<std::string, FreqSet> sets;
  for (const ChainNode& node : chain.nodes) {
    std::set<MilliHz> out;
    const auto& in = [&](const std::string& id) -> const FreqSet& { return sets.at(id); };

    std::visit(
        [&](const auto& op) {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, SourceNode> || std::is_same_v<T, VcoNode>) {
            out.insert(op.freq);
          } else if constexpr (std::is_same_v<T, DoubleNode>) {
            for (MilliHz f : in(op.in).components) out.insert(2 * f);
          } else if constexpr (std::is_same_v<T, ShiftNode>) {
            for (MilliHz f : in(op.in).components) out.insert(clamp_non_negative(f + op.delta));
          } else if constexpr (std::is_same_v<T, SidebandNode>) {
            for (MilliHz f : in(op.in).components) {
              for (int k : op.orders) out.insert(clamp_non_negative(f + k * op.offset));
            }
          } else if constexpr (std::is_same_v<T, BeatNode>) {
            for (MilliHz f1 : in(op.in1).components) {
              for (MilliHz f2 : in(op.in2).components) out.insert(std::abs(f1 - f2));
            }
          } else if constexpr (std::is_same_v<T, MixNode>) {
            for (MilliHz f1 : in(op.in1).components) {
              for (MilliHz f2 : in(op.in2).components) {
                out.insert(std::abs(f1 - f2));
                out.insert(f1 + f2);
              }
            }
          } else if constexpr (std::is_same_v<T, LowPassNode>) {
            for (MilliHz f : in(op.in).components) {
              if (f < op.cutoff) out.insert(f);
            }
          } else if constexpr (std::is_same_v<T, DivideNode>) {
            for (MilliHz f : in(op.in).components) {
              // Round to nearest mHz; every chain shipped here divides evenly.
              out.insert((f + op.n / 2) / op.n);
            }
          }
        },
        node.op);

    sets.emplace(node.id, make_set(std::move(out), node.id));
  }
  return sets;
}

CheckReport check_locks(const FreqChain& chain) {
  const auto sets = evaluate(chain);
  CheckReport report;
  for (const LockCheck& check : chain.checks) {
    const auto it = sets.find(check.node_id);
    if (it == sets.end()) {
      throw EvalError("check references unknown id '" + check.node_id + "'");
    }
    CheckResult result;
    result.id = check.node_id;
    result.expected = check.expected;
    MilliHz best_dist = std::numeric_limits<MilliHz>::max();
    for (MilliHz f : it->second.components) {
      const MilliHz dist = std::abs(f - check.expected);
      if (dist < best_dist) {
        best_dist = dist;
        result.nearest = f;
      }
    }
    result.pass = result.nearest.has_value() && best_dist <= check.tolerance;
    report.results.push_back(std::move(result));
    report.all_pass = report.all_pass && report.results.back().pass;
  }
  return report;
}

}  // namespace coldnav::freq_chain
