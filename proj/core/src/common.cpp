#include "planar_reach/common.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace planar_reach {

const char* err_name(Err e) {
  switch (e) {
    case Err::NonPlanarRotation: return "NonPlanarRotation";
    case Err::MalformedRing: return "MalformedRing";
    case Err::DisconnectedInput: return "DisconnectedInput";
    case Err::EmptyGraph: return "EmptyGraph";
    case Err::MismatchedStages: return "MismatchedStages";
    case Err::TooSmall: return "TooSmall";
    case Err::PreconditionViolated: return "PreconditionViolated";
    case Err::NotSimple: return "NotSimple";
    case Err::AlreadyOn: return "AlreadyOn";
    case Err::UnknownEdge: return "UnknownEdge";
    case Err::AlreadyOne: return "AlreadyOne";
    case Err::OverlapViolation: return "OverlapViolation";
    case Err::AlreadyDeleted: return "AlreadyDeleted";
    case Err::UnknownVertex: return "UnknownVertex";
    case Err::AlreadyContracted: return "AlreadyContracted";
    case Err::BadParams: return "BadParams";
    case Err::BlockCapExceeded: return "BlockCapExceeded";
    case Err::ParseError: return "ParseError";
    case Err::OracleCapExceeded: return "OracleCapExceeded";
  }
  return "UnknownError";
}

int log_level() {
  static int level = [] {
    const char* env = std::getenv("PLANAR_REACH_LOG");
    if (!env) return 0;
    if (!std::strcmp(env, "debug")) return 2;
    if (!std::strcmp(env, "info")) return 1;
    return 0;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::fprintf(stderr, "[planar_reach] %s\n", msg.c_str());
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::fprintf(stderr, "[planar_reach:debug] %s\n", msg.c_str());
}

}  // namespace planar_reach
