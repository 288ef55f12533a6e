#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// Declarative RF/optical frequency chains: a line-oriented DSL is parsed into
// a DAG of frequency-transforming nodes, every node's component set is
// evaluated in exact integer millihertz, and labeled check points assert the
// expected lock frequencies.

namespace coldnav::freq_chain {

/// Exact frequency in integer millihertz.
using MilliHz = std::int64_t;

inline constexpr MilliHz khz = 1000LL * 1000LL;
inline constexpr MilliHz mhz = khz * 1000LL;
inline constexpr MilliHz ghz = mhz * 1000LL;

/// Parses a literal like "3.284GHz", "-60MHz", "500kHz" into millihertz.
/// Suffix is mandatory and case-sensitive (Hz, kHz, MHz, GHz, THz). Literals
/// finer than 1 mHz are rejected.
MilliHz parse_frequency(std::string_view text);

/// Formats millihertz as Hz with the shortest exact decimal ("8000000 Hz"
/// style values print as "8 MHz" in diagnostics).
std::string format_frequency(MilliHz value);

struct SourceNode { MilliHz freq; };
struct VcoNode { MilliHz freq; };
struct DoubleNode { std::string in; };
struct ShiftNode { std::string in; MilliHz delta; };
struct SidebandNode { std::string in; MilliHz offset; std::vector<int> orders; };
struct BeatNode { std::string in1; std::string in2; };
struct MixNode { std::string in1; std::string in2; };
struct LowPassNode { std::string in; MilliHz cutoff; };
struct DivideNode { std::string in; long long n; };

using NodeOp = std::variant<SourceNode, VcoNode, DoubleNode, ShiftNode, SidebandNode,
                            BeatNode, MixNode, LowPassNode, DivideNode>;

struct ChainNode {
  std::string id;
  NodeOp op;
  int line = 0;
};

struct LockCheck {
  std::string node_id;
  MilliHz expected;
  MilliHz tolerance;
  int line = 0;
};

struct FreqChain {
  std::vector<ChainNode> nodes;   // topological order by construction
  std::vector<LockCheck> checks;
};

/// Set of frequency components carried on a DAG edge. Sorted, deduplicated,
/// all entries >= 0.
struct FreqSet {
  std::vector<MilliHz> components;

  bool contains(MilliHz f) const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest component set a node may carry before evaluation aborts with a
/// diagnostic; sideband/mix cascades can explode combinatorially.
inline constexpr std::size_t max_components = 64;

FreqChain parse_chain(std::string_view text);
FreqChain parse_chain_file(const std::string& path);

/// Component sets for every node, keyed by id. Pure function of the chain.
std::map<std::string, FreqSet> evaluate(const FreqChain& chain);

struct CheckResult {
  std::string id;
  MilliHz expected = 0;
  std::optional<MilliHz> nearest;  // absent when the node's set is empty
  bool pass = false;
};

struct CheckReport {
  std::vector<CheckResult> results;
  bool all_pass = true;
};

CheckReport check_locks(const FreqChain& chain);

}  // namespace coldnav::freq_chain
