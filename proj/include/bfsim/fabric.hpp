#pragma once

#include <compare>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "bfsim/types.hpp"

namespace bfsim {

/// Phase labels matching the per-level time breakdown reported per run.
enum class Phase : std::uint8_t {
  init,
  traversing,
  reducing,
  communication,
  compression_sieve,
};

const char* phase_name(Phase p);

struct PhaseTag {
  int level = 0;
  Phase phase = Phase::communication;
};

/// One collective call as seen by one rank. Overhead is the 8-byte-per-peer
/// size preamble of variable-size collectives; self-destined payloads are
/// never charged.
struct LedgerRecord {
  int rank = 0;
  int level = 0;
  Phase phase = Phase::communication;
  std::uint64_t payload_sent = 0;
  std::uint64_t overhead_sent = 0;
  std::uint64_t payload_recv = 0;
  std::uint64_t overhead_recv = 0;
  std::uint64_t messages = 0;

  std::uint64_t bytes_sent() const { return payload_sent + overhead_sent; }
  std::uint64_t bytes_recv() const { return payload_recv + overhead_recv; }
};

struct FabricOptions {
  double timeout_s = 30.0;
};

/// In-process simulation of p message-passing ranks with bulk-synchronous
/// collectives. All p ranks must enter each collective (same kind, same
/// phase tag) before any exits; a rank that never shows up is reported as a
/// deadlock after the configured timeout. Byte ledgers charge the sender
/// per peer: allgatherv fans each contribution out to p-1 peers, alltoallv
/// charges the off-diagonal payloads, allreduce_sum charges 8 bytes per
/// peer message.
class Fabric {
 public:
  using Options = FabricOptions;

  explicit Fabric(int ranks, Options opts = Options());
  int ranks() const { return p_; }

  /// Every rank receives all p payloads in rank order.
  std::vector<Bytes> allgatherv(int rank, Bytes payload, PhaseTag tag);
  /// payloads[j] goes to rank j; returns one payload per source rank.
  std::vector<Bytes> alltoallv(int rank, std::vector<Bytes> payloads,
                               PhaseTag tag);
  std::uint64_t allreduce_sum(int rank, std::uint64_t value, PhaseTag tag);

  /// Poisons the fabric; every blocked or future collective call throws.
  void abort(const std::string& reason);

  /// All records, rank-major, each rank's records in its own call order.
  std::vector<LedgerRecord> ledger() const;

 private:
  enum class Op : std::uint8_t { allgatherv, alltoallv, allreduce };
  enum class State : std::uint8_t { collecting, delivering };

  void check_rank(int rank) const;
  void enter_epoch(std::unique_lock<std::mutex>& lk, int rank, Op op,
                   PhaseTag tag);
  void wait_or_abort(std::unique_lock<std::mutex>& lk, bool (Fabric::*pred)() const,
                     const char* what);
  void finish_fetch(std::unique_lock<std::mutex>& lk);
  [[noreturn]] void abort_locked(const std::string& reason);
  void check_abort_locked() const;

  bool collecting_ready() const { return state_ == State::collecting; }
  bool delivering_ready() const { return state_ == State::delivering; }

  const int p_;
  const Options opts_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  bool aborted_ = false;
  std::string abort_reason_;

  State state_ = State::collecting;
  Op cur_op_ = Op::allgatherv;
  PhaseTag cur_tag_{};
  int arrived_ = 0;
  int fetched_ = 0;
  std::vector<bool> present_;

  std::vector<Bytes> gather_in_;
  std::vector<std::vector<Bytes>> a2a_in_;
  std::vector<std::vector<Bytes>> a2a_out_;
  std::vector<std::uint64_t> reduce_in_;
  std::uint64_t reduce_out_ = 0;

  std::vector<std::vector<LedgerRecord>> records_;
};

struct CostModelParams {
  double alpha = 0;  // seconds per message
  double beta = 0;   // seconds per byte

  void validate() const {
    if (alpha < 0 || beta < 0)
      throw std::invalid_argument("cost model parameters must be >= 0");
  }
};

/// Aggregated sender-side ledger view per rank.
struct CommStats {
  int ranks = 0;
  std::vector<std::uint64_t> bytes_per_rank;
  std::vector<std::uint64_t> messages_per_rank;

  static CommStats from_records(int ranks,
                                const std::vector<LedgerRecord>& records);
  /// Communication volume of the algorithm: max over ranks of bytes sent.
  std::uint64_t volume_max_rank() const;
};

struct LevelPhaseKey {
  int level = 0;
  Phase phase = Phase::communication;
  auto operator<=>(const LevelPhaseKey&) const = default;
};

/// T(n) = alpha + n*beta estimator. Per phase (and per level when grouped),
/// the estimate is the maximum over ranks of alpha*messages + beta*bytes.
std::map<Phase, double> estimate_time(int ranks,
                                      const std::vector<LedgerRecord>& records,
                                      CostModelParams params);
std::map<LevelPhaseKey, double> estimate_time_by_level(
    int ranks, const std::vector<LedgerRecord>& records, CostModelParams params);
/// Whole-algorithm estimate: max over ranks of that rank's total cost.
double estimate_time_total(int ranks, const std::vector<LedgerRecord>& records,
                           CostModelParams params);

}  // namespace bfsim
