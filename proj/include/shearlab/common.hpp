#pragma once
// Shared error model and small utilities used across the library.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace shearlab {

inline constexpr double PI = 3.141592653589793238462643383279502884;

// Error taxonomy. Categories map onto process exit codes:
// validation -> 2, numerical guard -> 3, acceptance -> 4.
enum class ErrorCode : int {
  Ok = 0,
  // validation
  NonMonotone,
  SupportViolation,
  HypothesisViolation,
  BadDescriptor,
  BadConfig,
  LatticeMismatch,
  MissingArtifacts,
  SpecHashMismatch,
  IoError,
  // numerical guards
  NoConvergence,
  NoContraction,
  DerivativeBlowup,
  InsufficientDecay,
  CflViolation,
  BlowupGuard,
  FrameDegenerate,
  FloorViolated,
  SingularNode,
  // acceptance
  AcceptanceFailure,
};

inline int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::Ok: return 0;
    case ErrorCode::NonMonotone:
    case ErrorCode::SupportViolation:
    case ErrorCode::HypothesisViolation:
    case ErrorCode::BadDescriptor:
    case ErrorCode::BadConfig:
    case ErrorCode::LatticeMismatch:
    case ErrorCode::MissingArtifacts:
    case ErrorCode::SpecHashMismatch:
    case ErrorCode::IoError: return 2;
    case ErrorCode::AcceptanceFailure: return 4;
    default: return 3;
  }
}

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::NonMonotone: return "NonMonotone";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::HypothesisViolation: return "HypothesisViolation";
    case ErrorCode::BadDescriptor: return "BadDescriptor";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::LatticeMismatch: return "LatticeMismatch";
    case ErrorCode::MissingArtifacts: return "MissingArtifacts";
    case ErrorCode::SpecHashMismatch: return "SpecHashMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NoContraction: return "NoContraction";
    case ErrorCode::DerivativeBlowup: return "DerivativeBlowup";
    case ErrorCode::InsufficientDecay: return "InsufficientDecay";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::BlowupGuard: return "BlowupGuard";
    case ErrorCode::FrameDegenerate: return "FrameDegenerate";
    case ErrorCode::FloorViolated: return "FloorViolated";
    case ErrorCode::SingularNode: return "SingularNode";
    case ErrorCode::AcceptanceFailure: return "AcceptanceFailure";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_name(code)) + ": " + msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool ok, ErrorCode code, const std::string& msg) {
  if (!ok) fail(code, msg);
}

// FNV-1a over bytes; used for config/grid fingerprints in output headers.
inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}
inline std::uint64_t fnv1a(const std::string& s, std::uint64_t seed = 1469598103934665603ull) {
  return fnv1a(s.data(), s.size(), seed);
}

std::string hex64(std::uint64_t v);

// Deterministic static work partition: item i is processed by worker i % nthreads,
// results land in caller-owned slots, so the output is independent of scheduling.
inline void parallel_for(std::size_t n, int nthreads, const std::function<void(std::size_t)>& fn) {
  if (nthreads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t nt = std::min<std::size_t>(nthreads, n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t w = 0; w < nt; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < n; i += nt) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline const char* version_string() { return "0.1.0"; }

}  // namespace shearlab
