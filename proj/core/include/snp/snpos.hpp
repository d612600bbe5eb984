#pragma once

// A toy operating-system loop whose bookkeeping runs on SN P devices:
// the sorter orders jobs by priority, the adder accumulates executed steps
// and the equality checker decides whether a job body has halted. Job
// bodies are register machines.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snp/devices.hpp"
#include "snp/regmachine.hpp"

namespace snp::os {

enum class Scope { Foreground, Background };

std::string_view to_string(Scope scope);

using ResourceMap = std::map<std::string, std::uint64_t>;

struct JobSpec {
  std::string id;
  rm::RegisterMachine body;
  std::size_t instruction_count = 0;  // must match body
  ResourceMap resources;
  Scope scope = Scope::Foreground;
  std::uint64_t priority = 0;
};

JobSpec make_job(std::string id, rm::RegisterMachine body, ResourceMap resources,
                 Scope scope, std::uint64_t priority);

struct Admission {
  bool admitted = false;
  std::string blocking_resource;  // set when rejected
};

struct DispatchRecord {
  enum class Kind { Dispatch, Reject };

  std::uint64_t tick = 0;
  Kind kind = Kind::Dispatch;
  std::string job;
  std::vector<std::string> order;  // sorter order this tick (Dispatch only)
  std::uint64_t steps = 0;
  bool completed = false;
  std::string blocking_resource;  // Reject only
  std::uint64_t accounting_total = 0;

  friend bool operator==(const DispatchRecord&, const DispatchRecord&) = default;
};

/// `tick  kind  job  steps  status  total  order`, tab separated.
std::string format_record(const DispatchRecord& record);

struct QuantumReport {
  std::string job;
  std::uint64_t steps = 0;
  bool halted = false;
};

class Environment {
 public:
  static constexpr std::uint64_t kDefaultPriorityCap = 64;

  explicit Environment(ResourceMap pool, std::uint64_t priority_cap = kDefaultPriorityCap);

  /// Debits the pool and queues the job when every request fits.
  /// Throws ValidationError on a duplicate id or an inconsistent spec.
  Admission submit_job(JobSpec spec);

  /// Queued job ids by (priority desc, id asc), computed by the SNP sorter.
  /// Throws SimulationError on an empty queue or a priority above the cap.
  std::vector<std::string> schedule_round();

  /// Runs up to `quantum` steps of the job's body. A halting job releases
  /// its resources and leaves the queue.
  QuantumReport execute_quantum(const std::string& id, std::uint64_t quantum);

  /// Executed steps so far, accumulated on the SNP adder.
  std::uint64_t account_total() const noexcept { return accounting_total_; }

  /// Compares the job's position with its halt label on the SNP equality device.
  bool job_finished(const std::string& id) const;

  /// One scheduling round plus one quantum for the head job.
  /// Returns nullopt when the queue is empty.
  std::optional<DispatchRecord> tick(std::uint64_t quantum);

  const ResourceMap& available() const noexcept { return available_; }
  const ResourceMap& initial_pool() const noexcept { return initial_pool_; }
  const std::vector<std::string>& queue() const noexcept { return queue_; }
  const std::vector<std::string>& completed() const noexcept { return completed_; }
  const std::vector<DispatchRecord>& trace() const noexcept { return trace_; }
  const std::vector<std::uint64_t>& step_log() const noexcept { return step_log_; }
  std::uint64_t ticks() const noexcept { return tick_; }
  std::uint64_t priority_cap() const noexcept { return priority_cap_; }
  bool known(const std::string& id) const { return jobs_.count(id) != 0; }
  /// Units each live (admitted, not completed) job holds.
  std::map<std::string, ResourceMap> holdings() const;
  /// available + live holdings == initial pool, per resource.
  bool resources_conserved() const;

 private:
  struct Job {
    JobSpec spec;
    rm::MachineState state;
    bool completed = false;
  };

  const devices::DeviceHandle& sorter(std::size_t n);

  ResourceMap initial_pool_;
  ResourceMap available_;
  std::uint64_t priority_cap_;
  devices::DeviceHandle adder_;
  devices::DeviceHandle equality_;
  std::map<std::size_t, devices::DeviceHandle> sorters_;
  std::map<std::string, Job> jobs_;
  std::vector<std::string> queue_;
  std::vector<std::string> completed_;
  std::vector<DispatchRecord> trace_;
  std::vector<std::uint64_t> step_log_;
  std::uint64_t accounting_total_ = 0;
  std::uint64_t tick_ = 0;
};

/// Submits every job in order, then ticks until all admitted jobs complete
/// or `ticks` rounds have run. Returns the full trace.
std::vector<DispatchRecord> run_os(Environment& env, std::vector<JobSpec> jobs,
                                   std::uint64_t ticks, std::uint64_t quantum);

/// Job batch file:
///   pool <name>=<units>[,...]
///   job <id> priority <p> scope <fg|bg> resources <name>=<units>[,...]|- body <path>
/// Body paths are relative to `base_dir`.
struct JobBatch {
  ResourceMap pool;
  std::vector<JobSpec> jobs;
};
JobBatch parse_job_batch(std::string_view text, const std::filesystem::path& base_dir);

}  // namespace snp::os
