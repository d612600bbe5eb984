#include "snp/snpos.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "snp/error.hpp"

namespace snp::os {

std::string_view to_string(Scope scope) { return scope == Scope::Foreground ? "fg" : "bg"; }

JobSpec make_job(std::string id, rm::RegisterMachine body, ResourceMap resources, Scope scope,
                 std::uint64_t priority) {
  JobSpec spec{std::move(id), std::move(body), 0, std::move(resources), scope, priority};
  spec.instruction_count = spec.body.instruction_count();
  return spec;
}

std::string format_record(const DispatchRecord& r) {
  std::ostringstream out;
  out << r.tick << '\t';
  if (r.kind == DispatchRecord::Kind::Reject) {
    out << "reject\t" << r.job << "\t0\tblocked:" << r.blocking_resource << '\t'
        << r.accounting_total << "\t-";
    return out.str();
  }
  out << "dispatch\t" << r.job << '\t' << r.steps << '\t'
      << (r.completed ? "completed" : "running") << '\t' << r.accounting_total << '\t';
  for (std::size_t i = 0; i < r.order.size(); ++i) out << (i ? "," : "") << r.order[i];
  return out.str();
}

Environment::Environment(ResourceMap pool, std::uint64_t priority_cap)
    : initial_pool_(pool),
      available_(std::move(pool)),
      priority_cap_(priority_cap),
      adder_(devices::adder_device()),
      equality_(devices::equality_device()) {
  if (priority_cap_ == 0) throw ValidationError("priority cap must be at least 1");
}

const devices::DeviceHandle& Environment::sorter(std::size_t n) {
  auto it = sorters_.find(n);
  if (it == sorters_.end()) it = sorters_.emplace(n, devices::sorter_device(n, priority_cap_)).first;
  return it->second;
}

Admission Environment::submit_job(JobSpec spec) {
  if (jobs_.count(spec.id)) throw ValidationError("duplicate job id '" + spec.id + "'");
  if (spec.instruction_count != spec.body.instruction_count()) {
    throw ValidationError("job '" + spec.id + "' declares " + std::to_string(spec.instruction_count) +
                          " instructions but its body has " +
                          std::to_string(spec.body.instruction_count()));
  }
  for (const auto& [name, units] : spec.resources) {
    if (units == 0) continue;
    auto it = available_.find(name);
    if (it == available_.end() || it->second < units) {
      DispatchRecord rec;
      rec.tick = tick_;
      rec.kind = DispatchRecord::Kind::Reject;
      rec.job = spec.id;
      rec.blocking_resource = name;
      rec.accounting_total = accounting_total_;
      trace_.push_back(std::move(rec));
      return {false, name};
    }
  }
  for (const auto& [name, units] : spec.resources) {
    if (units) available_[name] -= units;
  }
  std::string id = spec.id;
  rm::MachineState state = rm::initial_state(spec.body);
  jobs_.emplace(id, Job{std::move(spec), std::move(state), false});
  queue_.push_back(std::move(id));
  return {true, {}};
}

std::vector<std::string> Environment::schedule_round() {
  if (queue_.empty()) throw SimulationError("no queued jobs to schedule");
  std::vector<std::uint64_t> priorities;
  for (const auto& id : queue_) {
    const std::uint64_t p = jobs_.at(id).spec.priority;
    if (p > priority_cap_) {
      throw SimulationError("job '" + id + "' has priority " + std::to_string(p) +
                            " above the sorter cap " + std::to_string(priority_cap_));
    }
    priorities.push_back(p);
  }
  const auto sorted = devices::sort_numbers(sorter(queue_.size()), priorities);

  // The sorter yields priority values; attach ids, smallest id first on ties.
  std::vector<std::string> by_id = queue_;
  std::sort(by_id.begin(), by_id.end());
  std::vector<bool> used(by_id.size(), false);
  std::vector<std::string> order;
  for (std::uint64_t value : sorted) {
    std::size_t k = 0;
    while (k < by_id.size() && (used[k] || jobs_.at(by_id[k]).spec.priority != value)) ++k;
    if (k == by_id.size()) throw std::logic_error("sorter output is not a permutation of priorities");
    used[k] = true;
    order.push_back(by_id[k]);
  }

  std::vector<std::string> native = queue_;
  std::sort(native.begin(), native.end(), [this](const std::string& a, const std::string& b) {
    const auto pa = jobs_.at(a).spec.priority;
    const auto pb = jobs_.at(b).spec.priority;
    return pa != pb ? pa > pb : a < b;
  });
  if (order != native) throw std::logic_error("SNP sorter order disagrees with native order");
  return order;
}

QuantumReport Environment::execute_quantum(const std::string& id, std::uint64_t quantum) {
  auto it = jobs_.find(id);
  if (it == jobs_.end()) throw SimulationError("unknown job '" + id + "'");
  Job& job = it->second;
  if (job.completed) throw SimulationError("job '" + id + "' has already completed");

  QuantumReport report{id, 0, false};
  rm::BranchChooser chooser;
  const rm::RegisterMachine& body = job.spec.body;
  while (report.steps < quantum && job.state.current != body.halt()) {
    job.state = rm::step_machine(body, std::move(job.state), chooser);
    ++report.steps;
  }
  report.halted = job.state.current == body.halt();

  step_log_.push_back(report.steps);
  const std::uint64_t native_total = accounting_total_ + report.steps;
  accounting_total_ = devices::add_numbers(adder_, accounting_total_, report.steps);
  if (accounting_total_ != native_total) {
    throw std::logic_error("SNP adder total disagrees with native sum");
  }

  if (report.halted) {
    job.completed = true;
    for (const auto& [name, units] : job.spec.resources) {
      if (units) available_[name] += units;
    }
    queue_.erase(std::find(queue_.begin(), queue_.end(), id));
    completed_.push_back(id);
  }
  return report;
}

bool Environment::job_finished(const std::string& id) const {
  auto it = jobs_.find(id);
  if (it == jobs_.end()) throw SimulationError("unknown job '" + id + "'");
  const Job& job = it->second;
  const bool finished = devices::compare_numbers(equality_, job.state.current, job.spec.body.halt()).equal;
  if (finished != (job.state.current == job.spec.body.halt())) {
    throw std::logic_error("SNP equality check disagrees with native comparison");
  }
  return finished;
}

std::optional<DispatchRecord> Environment::tick(std::uint64_t quantum) {
  if (queue_.empty()) return std::nullopt;
  ++tick_;
  DispatchRecord rec;
  rec.tick = tick_;
  rec.order = schedule_round();
  rec.job = rec.order.front();
  QuantumReport q = execute_quantum(rec.job, quantum);
  rec.steps = q.steps;
  rec.completed = q.halted;
  rec.accounting_total = accounting_total_;
  trace_.push_back(rec);
  return rec;
}

std::map<std::string, ResourceMap> Environment::holdings() const {
  std::map<std::string, ResourceMap> out;
  for (const auto& [id, job] : jobs_) {
    if (!job.completed) out.emplace(id, job.spec.resources);
  }
  return out;
}

bool Environment::resources_conserved() const {
  ResourceMap total = available_;
  for (const auto& [id, held] : holdings()) {
    for (const auto& [name, units] : held) {
      if (units) total[name] += units;
    }
  }
  for (const auto& [name, units] : total) {
    auto it = initial_pool_.find(name);
    if ((it == initial_pool_.end() ? 0 : it->second) != units) return false;
  }
  return std::all_of(initial_pool_.begin(), initial_pool_.end(), [&](const auto& kv) {
    auto it = total.find(kv.first);
    return it != total.end() && it->second == kv.second;
  });
}

std::vector<DispatchRecord> run_os(Environment& env, std::vector<JobSpec> jobs,
                                   std::uint64_t ticks, std::uint64_t quantum) {
  for (auto& job : jobs) env.submit_job(std::move(job));
  for (std::uint64_t t = 0; t < ticks; ++t) {
    if (!env.tick(quantum)) break;
  }
  return env.trace();
}

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t b = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > b) out.push_back(line.substr(b, i - b));
  }
  return out;
}

std::uint64_t to_number(std::string_view s, std::size_t line) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw ParseError("expected a non-negative integer, got '" + std::string(s) + "'", line, 0);
  }
  return v;
}

ResourceMap parse_resources(std::string_view s, std::size_t line) {
  ResourceMap out;
  if (s == "-") return out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string_view::npos) comma = s.size();
    std::string_view item = s.substr(pos, comma - pos);
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ParseError("expected <name>=<units>, got '" + std::string(item) + "'", line, 0);
    }
    std::string name(item.substr(0, eq));
    if (!out.emplace(name, to_number(item.substr(eq + 1), line)).second) {
      throw ParseError("resource '" + name + "' listed twice", line, 0);
    }
    pos = comma + 1;
  }
  return out;
}

}  // namespace

JobBatch parse_job_batch(std::string_view text, const std::filesystem::path& base_dir) {
  JobBatch batch;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto w = split_words(line);
    if (w.empty()) continue;

    if (w[0] == "pool") {
      if (w.size() != 2) throw ParseError("expected: pool <name>=<units>[,...]", line_no, 0);
      for (auto& [name, units] : parse_resources(w[1], line_no)) batch.pool[name] += units;
      continue;
    }
    if (w[0] != "job") throw ParseError("unknown declaration '" + std::string(w[0]) + "'", line_no, 0);
    if (w.size() != 10 || w[2] != "priority" || w[4] != "scope" || w[6] != "resources" ||
        w[8] != "body") {
      throw ParseError(
          "expected: job <id> priority <p> scope <fg|bg> resources <list> body <path>", line_no, 0);
    }
    Scope scope;
    if (w[5] == "fg") {
      scope = Scope::Foreground;
    } else if (w[5] == "bg") {
      scope = Scope::Background;
    } else {
      throw ParseError("scope must be fg or bg", line_no, 0);
    }
    const std::filesystem::path body_path = base_dir / std::string(w[9]);
    std::ifstream in(body_path);
    if (!in) throw ValidationError("cannot read job body '" + body_path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    rm::RegisterMachine body = [&] {
      try {
        return rm::parse_machine(buf.str());
      } catch (const Error& e) {
        throw ValidationError(body_path.string() + ": " + e.what());
      }
    }();
    batch.jobs.push_back(make_job(std::string(w[1]), std::move(body),
                                  parse_resources(w[7], line_no), scope, to_number(w[3], line_no)));
  }
  return batch;
}

}  // namespace snp::os
