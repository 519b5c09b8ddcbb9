#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sck {

enum class Errc {
  EmptySide,
  FullSide,
  UnknownEdgeId,
  SelfLoopRejected,
  OverlappingGroups,
  OverlappingTerminals,
  NotEnoughTerminals,
  SameVertex,
  TooLarge,
  NotABunch,
  TooLargeForConstruction,
  NotAProperPath,
  InvalidMinimalCut,
  IntraUnitEdge,
  NotAClass,
  VertexNotInClass,
  KTooLargeForSmallMincut,
  NoWitness,
  ClassHasTerminal,
  UnknownEdge,
  SameEdge,
  IncompleteFamily,
  InfeasibleParameters,
  InvalidVertex,
  Disconnected,
  ParseError,
  BadIndex,
  Internal,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what = {});

// Internal consistency check that stays on in release builds.
inline void require(bool ok, const char* what) {
  if (!ok) fail(Errc::Internal, what);
}

}  // namespace sck
