#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "snp/error.hpp"
#include "snp/snpos.hpp"

using namespace snp;
using namespace snp::os;

namespace {

rm::RegisterMachine two_steps() { return rm::parse_machine("l0: ADD 1 l1\nl1: ADD 1 lh\nlh: HALT\n"); }
rm::RegisterMachine looping() { return rm::parse_machine("l0: ADD 1 l0\nlh: HALT\n"); }
rm::RegisterMachine counting(int n) {
  std::string text;
  for (int i = 0; i < n; ++i) {
    text += "l" + std::to_string(i) + ": ADD 1 " + (i + 1 == n ? "lh" : "l" + std::to_string(i + 1)) + "\n";
  }
  return rm::parse_machine(text + "lh: HALT\n");
}

JobSpec job(std::string id, std::uint64_t priority, ResourceMap res = {},
            rm::RegisterMachine body = two_steps()) {
  return make_job(std::move(id), std::move(body), std::move(res), Scope::Foreground, priority);
}

}  // namespace

TEST_CASE("admission") {
  Environment env({{"cpu", 4}});
  auto a = env.submit_job(job("j1", 1, {{"cpu", 2}}));
  CHECK(a.admitted);
  CHECK(env.available().at("cpu") == 2);

  Environment small({{"cpu", 1}});
  auto r = small.submit_job(job("j1", 1, {{"cpu", 2}}));
  CHECK_FALSE(r.admitted);
  CHECK(r.blocking_resource == "cpu");
  CHECK(small.queue().empty());
  REQUIRE(small.trace().size() == 1);
  CHECK(format_record(small.trace()[0]) == "0\treject\tj1\t0\tblocked:cpu\t0\t-");

  CHECK(small.submit_job(job("free", 1)).admitted);
  CHECK(small.submit_job(job("gpu", 1, {{"gpu", 1}})).blocking_resource == "gpu");
  CHECK_THROWS_AS(small.submit_job(job("free", 2)), ValidationError);

  auto bad = job("bad", 1);
  bad.instruction_count = 99;
  CHECK_THROWS_AS(small.submit_job(bad), ValidationError);
  CHECK(small.resources_conserved());
}

TEST_CASE("schedule_round") {
  Environment env({});
  env.submit_job(job("j1", 3));
  env.submit_job(job("j2", 5));
  CHECK(env.schedule_round() == std::vector<std::string>{"j2", "j1"});

  Environment tie({});
  tie.submit_job(job("j2", 2));
  tie.submit_job(job("j1", 2));
  CHECK(tie.schedule_round() == std::vector<std::string>{"j1", "j2"});

  Environment one({});
  one.submit_job(job("solo", 0));
  CHECK(one.schedule_round() == std::vector<std::string>{"solo"});

  Environment empty({});
  CHECK_THROWS_AS(empty.schedule_round(), SimulationError);

  Environment capped({}, 4);
  capped.submit_job(job("hot", 5));
  CHECK_THROWS_AS(capped.schedule_round(), SimulationError);
}

TEST_CASE("execute_quantum") {
  Environment env({{"mem", 3}});
  env.submit_job(job("short", 1, {{"mem", 2}}));
  env.submit_job(job("loop", 1, {{"mem", 1}}, looping()));
  CHECK(env.available().at("mem") == 0);

  auto q = env.execute_quantum("short", 10);
  CHECK(q.halted);
  CHECK(q.steps == 2);
  CHECK(env.available().at("mem") == 2);
  CHECK(env.completed() == std::vector<std::string>{"short"});

  auto l = env.execute_quantum("loop", 5);
  CHECK(l.steps == 5);
  CHECK_FALSE(l.halted);
  CHECK(env.queue() == std::vector<std::string>{"loop"});

  auto z = env.execute_quantum("loop", 0);
  CHECK(z.steps == 0);
  CHECK(env.resources_conserved());
  CHECK_THROWS_AS(env.execute_quantum("ghost", 1), SimulationError);
  CHECK_THROWS_AS(env.execute_quantum("short", 1), SimulationError);
}

TEST_CASE("accounting through the adder") {
  Environment env({});
  CHECK(env.account_total() == 0);
  env.submit_job(job("three", 1, {}, counting(3)));
  env.submit_job(job("four", 1, {}, counting(4)));
  env.execute_quantum("three", 10);
  env.execute_quantum("four", 10);
  CHECK(env.step_log() == std::vector<std::uint64_t>{3, 4});
  CHECK(env.account_total() == 7);

  Environment zeros({});
  zeros.submit_job(job("five", 1, {}, counting(5)));
  zeros.execute_quantum("five", 0);
  zeros.execute_quantum("five", 0);
  zeros.execute_quantum("five", 5);
  CHECK(zeros.account_total() == 5);
}

TEST_CASE("job_finished") {
  Environment env({});
  env.submit_job(job("done", 1));
  env.submit_job(job("loop", 1, {}, looping()));
  CHECK_FALSE(env.job_finished("done"));
  env.execute_quantum("done", 2);  // completes exactly at the boundary
  CHECK(env.job_finished("done"));
  CHECK_FALSE(env.job_finished("loop"));
  env.execute_quantum("loop", 3);
  CHECK_FALSE(env.job_finished("loop"));
  CHECK_THROWS_AS(env.job_finished("ghost"), SimulationError);
}

TEST_CASE("run_os") {
  Environment idle({});
  CHECK(run_os(idle, {}, 10, 4).empty());

  Environment env({{"cpu", 2}});
  std::vector<JobSpec> jobs;
  jobs.push_back(job("low", 1, {{"cpu", 1}}, counting(3)));
  jobs.push_back(job("high", 7, {{"cpu", 1}}, counting(3)));
  jobs.push_back(job("greedy", 9, {{"cpu", 5}}));
  auto trace = run_os(env, std::move(jobs), 20, 2);
  REQUIRE(trace.size() == 5);
  CHECK(trace[0].kind == DispatchRecord::Kind::Reject);
  CHECK(trace[0].job == "greedy");
  CHECK(format_record(trace[1]) == "1\tdispatch\thigh\t2\trunning\t2\thigh,low");
  CHECK(format_record(trace[2]) == "2\tdispatch\thigh\t1\tcompleted\t3\thigh,low");
  CHECK(format_record(trace[3]) == "3\tdispatch\tlow\t2\trunning\t5\tlow");
  CHECK(format_record(trace[4]) == "4\tdispatch\tlow\t1\tcompleted\t6\tlow");
  CHECK(env.completed() == std::vector<std::string>{"high", "low"});
  CHECK(env.available().at("cpu") == 2);
  for (const auto& rec : trace) CHECK((rec.job != "greedy" || rec.kind == DispatchRecord::Kind::Reject));

  // Same inputs, same trace.
  Environment again({{"cpu", 2}});
  std::vector<JobSpec> jobs2;
  jobs2.push_back(job("low", 1, {{"cpu", 1}}, counting(3)));
  jobs2.push_back(job("high", 7, {{"cpu", 1}}, counting(3)));
  jobs2.push_back(job("greedy", 9, {{"cpu", 5}}));
  CHECK(run_os(again, std::move(jobs2), 20, 2) == trace);
}

TEST_CASE("job batch parsing") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "snp_batch_test";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "two.rm") << "l0: ADD 1 l1\nl1: ADD 1 lh\nlh: HALT\n";
  }
  auto batch = parse_job_batch(
      "# demo\npool cpu=2,mem=8\n"
      "job a priority 3 scope fg resources cpu=1 body two.rm\n"
      "job b priority 1 scope bg resources - body two.rm\n",
      dir);
  CHECK(batch.pool == ResourceMap{{"cpu", 2}, {"mem", 8}});
  REQUIRE(batch.jobs.size() == 2);
  CHECK(batch.jobs[0].resources == ResourceMap{{"cpu", 1}});
  CHECK(batch.jobs[1].scope == Scope::Background);
  CHECK(batch.jobs[1].resources.empty());
  CHECK(batch.jobs[0].instruction_count == 3);

  CHECK_THROWS_AS(parse_job_batch("job a priority 3 scope fg resources - body missing.rm\n", dir),
                  ValidationError);
  CHECK_THROWS_AS(parse_job_batch("job a priority x scope fg resources - body two.rm\n", dir),
                  ParseError);
  CHECK_THROWS_AS(parse_job_batch("job a priority 1 scope up resources - body two.rm\n", dir),
                  ParseError);
  CHECK(parse_job_batch("", dir).jobs.empty());
  fs::remove_all(dir);
}
