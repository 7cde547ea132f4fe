#include "bfsim/fabric.hpp"

#include <algorithm>
#include <chrono>

namespace bfsim {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::init:
      return "init";
    case Phase::traversing:
      return "traversing";
    case Phase::reducing:
      return "reducing";
    case Phase::communication:
      return "communication";
    case Phase::compression_sieve:
      return "compression_sieve";
  }
  return "?";
}

Fabric::Fabric(int ranks, Options opts) : p_(ranks), opts_(opts) {
  if (ranks < 1) throw std::invalid_argument("Fabric needs at least one rank");
  present_.assign(p_, false);
  records_.resize(p_);
}

void Fabric::check_rank(int rank) const {
  if (rank < 0 || rank >= p_) throw std::invalid_argument("rank out of range");
}

void Fabric::check_abort_locked() const {
  if (aborted_) throw FabricError("fabric aborted: " + abort_reason_);
}

void Fabric::abort_locked(const std::string& reason) {
  aborted_ = true;
  abort_reason_ = reason;
  cv_.notify_all();
  throw FabricError("fabric aborted: " + reason);
}

void Fabric::abort(const std::string& reason) {
  std::lock_guard<std::mutex> lk(mu_);
  if (aborted_) return;
  aborted_ = true;
  abort_reason_ = reason;
  cv_.notify_all();
}

void Fabric::wait_or_abort(std::unique_lock<std::mutex>& lk,
                           bool (Fabric::*pred)() const, const char* what) {
  // system_clock deadline: libstdc++ maps it to pthread_cond_timedwait,
  // which thread sanitizers intercept (steady_clock goes through
  // pthread_cond_clockwait, which older tsan runtimes do not track)
  const auto deadline =
      std::chrono::system_clock::now() +
      std::chrono::duration_cast<std::chrono::system_clock::duration>(
          std::chrono::duration<double>(opts_.timeout_s));
  while (!(this->*pred)()) {
    check_abort_locked();
    if (cv_.wait_until(lk, deadline) == std::cv_status::timeout &&
        !(this->*pred)()) {
      check_abort_locked();
      abort_locked(std::string("deadlock detected while waiting for ") + what);
    }
  }
  check_abort_locked();
}

void Fabric::enter_epoch(std::unique_lock<std::mutex>& lk, int rank, Op op,
                         PhaseTag tag) {
  check_abort_locked();
  // the previous epoch must fully drain before a new one opens
  wait_or_abort(lk, &Fabric::collecting_ready, "epoch to open");
  if (arrived_ == 0) {
    cur_op_ = op;
    cur_tag_ = tag;
    std::fill(present_.begin(), present_.end(), false);
    gather_in_.assign(p_, Bytes{});
    a2a_in_.assign(p_, {});
    a2a_out_.assign(p_, {});
    reduce_in_.assign(p_, 0);
    reduce_out_ = 0;
  } else if (cur_op_ != op || cur_tag_.level != tag.level ||
             cur_tag_.phase != tag.phase) {
    abort_locked("collective mismatch: ranks entered different operations");
  }
  if (present_[rank]) {
    abort_locked("rank entered the same collective twice");
  }
  present_[rank] = true;
  ++arrived_;
}

void Fabric::finish_fetch(std::unique_lock<std::mutex>&) {
  ++fetched_;
  if (fetched_ == p_) {
    fetched_ = 0;
    arrived_ = 0;
    state_ = State::collecting;
    gather_in_.clear();
    a2a_in_.clear();
    a2a_out_.clear();
    cv_.notify_all();
  }
}

std::vector<Bytes> Fabric::allgatherv(int rank, Bytes payload, PhaseTag tag) {
  check_rank(rank);
  std::unique_lock<std::mutex> lk(mu_);
  enter_epoch(lk, rank, Op::allgatherv, tag);
  gather_in_[rank] = std::move(payload);
  if (arrived_ == p_) {
    state_ = State::delivering;
    cv_.notify_all();
  } else {
    wait_or_abort(lk, &Fabric::delivering_ready, "all ranks in allgatherv");
  }

  std::vector<Bytes> result = gather_in_;  // rank order, own piece included
  LedgerRecord rec;
  rec.rank = rank;
  rec.level = tag.level;
  rec.phase = tag.phase;
  rec.messages = p_ - 1;
  rec.overhead_sent = rec.overhead_recv = 8ull * (p_ - 1);
  rec.payload_sent = std::uint64_t(p_ - 1) * gather_in_[rank].size();
  for (int j = 0; j < p_; ++j)
    if (j != rank) rec.payload_recv += gather_in_[j].size();
  records_[rank].push_back(rec);

  finish_fetch(lk);
  return result;
}

std::vector<Bytes> Fabric::alltoallv(int rank, std::vector<Bytes> payloads,
                                     PhaseTag tag) {
  check_rank(rank);
  if (payloads.size() != static_cast<std::size_t>(p_))
    throw std::invalid_argument("alltoallv: need one payload per destination");
  std::unique_lock<std::mutex> lk(mu_);
  enter_epoch(lk, rank, Op::alltoallv, tag);

  LedgerRecord rec;
  rec.rank = rank;
  rec.level = tag.level;
  rec.phase = tag.phase;
  rec.messages = p_ - 1;
  rec.overhead_sent = rec.overhead_recv = 8ull * (p_ - 1);
  for (int j = 0; j < p_; ++j)
    if (j != rank) rec.payload_sent += payloads[j].size();

  a2a_in_[rank] = std::move(payloads);
  if (arrived_ == p_) {
    // exact transpose of the payload matrix
    for (int dst = 0; dst < p_; ++dst) {
      a2a_out_[dst].resize(p_);
      for (int src = 0; src < p_; ++src)
        a2a_out_[dst][src] = std::move(a2a_in_[src][dst]);
    }
    state_ = State::delivering;
    cv_.notify_all();
  } else {
    wait_or_abort(lk, &Fabric::delivering_ready, "all ranks in alltoallv");
  }

  std::vector<Bytes> result = std::move(a2a_out_[rank]);
  for (int j = 0; j < p_; ++j)
    if (j != rank) rec.payload_recv += result[j].size();
  records_[rank].push_back(rec);

  finish_fetch(lk);
  return result;
}

std::uint64_t Fabric::allreduce_sum(int rank, std::uint64_t value, PhaseTag tag) {
  check_rank(rank);
  std::unique_lock<std::mutex> lk(mu_);
  enter_epoch(lk, rank, Op::allreduce, tag);
  reduce_in_[rank] = value;
  if (arrived_ == p_) {
    reduce_out_ = 0;
    for (std::uint64_t v : reduce_in_) reduce_out_ += v;
    state_ = State::delivering;
    cv_.notify_all();
  } else {
    wait_or_abort(lk, &Fabric::delivering_ready, "all ranks in allreduce");
  }

  const std::uint64_t result = reduce_out_;
  LedgerRecord rec;
  rec.rank = rank;
  rec.level = tag.level;
  rec.phase = tag.phase;
  rec.messages = p_ - 1;
  rec.payload_sent = rec.payload_recv = 8ull * (p_ - 1);
  records_[rank].push_back(rec);

  finish_fetch(lk);
  return result;
}

std::vector<LedgerRecord> Fabric::ledger() const {
  std::lock_guard<std::mutex> lk(mu_);
  std::vector<LedgerRecord> out;
  for (const auto& per_rank : records_)
    out.insert(out.end(), per_rank.begin(), per_rank.end());
  return out;
}

CommStats CommStats::from_records(int ranks,
                                  const std::vector<LedgerRecord>& records) {
  CommStats stats;
  stats.ranks = ranks;
  stats.bytes_per_rank.assign(ranks, 0);
  stats.messages_per_rank.assign(ranks, 0);
  for (const auto& r : records) {
    stats.bytes_per_rank[r.rank] += r.bytes_sent();
    stats.messages_per_rank[r.rank] += r.messages;
  }
  return stats;
}

std::uint64_t CommStats::volume_max_rank() const {
  std::uint64_t v = 0;
  for (std::uint64_t b : bytes_per_rank) v = std::max(v, b);
  return v;
}

std::map<Phase, double> estimate_time(int ranks,
                                      const std::vector<LedgerRecord>& records,
                                      CostModelParams params) {
  params.validate();
  std::map<Phase, std::vector<double>> per_rank;
  for (const auto& r : records) {
    auto& v = per_rank[r.phase];
    v.resize(ranks, 0.0);
    v[r.rank] += params.alpha * double(r.messages) + params.beta * double(r.bytes_sent());
  }
  std::map<Phase, double> out;
  for (const auto& [phase, v] : per_rank)
    out[phase] = *std::max_element(v.begin(), v.end());
  return out;
}

std::map<LevelPhaseKey, double> estimate_time_by_level(
    int ranks, const std::vector<LedgerRecord>& records,
    CostModelParams params) {
  params.validate();
  std::map<LevelPhaseKey, std::vector<double>> per_rank;
  for (const auto& r : records) {
    auto& v = per_rank[{r.level, r.phase}];
    v.resize(ranks, 0.0);
    v[r.rank] += params.alpha * double(r.messages) + params.beta * double(r.bytes_sent());
  }
  std::map<LevelPhaseKey, double> out;
  for (const auto& [key, v] : per_rank)
    out[key] = *std::max_element(v.begin(), v.end());
  return out;
}

double estimate_time_total(int ranks, const std::vector<LedgerRecord>& records,
                           CostModelParams params) {
  params.validate();
  std::vector<double> per_rank(ranks, 0.0);
  for (const auto& r : records)
    per_rank[r.rank] += params.alpha * double(r.messages) + params.beta * double(r.bytes_sent());
  return per_rank.empty() ? 0.0 : *std::max_element(per_rank.begin(), per_rank.end());
}

}  // namespace bfsim
