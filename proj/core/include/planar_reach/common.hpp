#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace planar_reach {

using VId = std::int32_t;   // vertex id
using EId = std::int32_t;   // edge id (stable across derived-graph builds)
using Dart = std::int32_t;  // dart id; edge e owns darts 2e (tail side) and 2e+1 (head side)

inline constexpr Dart tail_dart(EId e) { return 2 * e; }
inline constexpr Dart head_dart(EId e) { return 2 * e + 1; }
inline constexpr EId edge_of(Dart d) { return d >> 1; }
inline constexpr bool is_head_side(Dart d) { return d & 1; }
inline constexpr Dart twin(Dart d) { return d ^ 1; }

enum class Err {
  NonPlanarRotation,
  MalformedRing,
  DisconnectedInput,
  EmptyGraph,
  MismatchedStages,
  TooSmall,
  PreconditionViolated,
  NotSimple,
  AlreadyOn,
  UnknownEdge,
  AlreadyOne,
  OverlapViolation,
  AlreadyDeleted,
  UnknownVertex,
  AlreadyContracted,
  BadParams,
  BlockCapExceeded,
  ParseError,
  OracleCapExceeded,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Err code, const std::string& what) {
  if (!ok) fail(code, what);
}

// Deterministic RNG independent of the standard library's distributions so
// that identical seeds give identical artifacts across builds.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, bound)
  std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }

  int range(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool flip() { return next() & 1; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::uint64_t state_;
};

// Trace logging gated by PLANAR_REACH_LOG (off|info|debug).
int log_level();
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace planar_reach
