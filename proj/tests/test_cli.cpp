#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

using json = nlohmann::json;

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

const char* cli_bin() {
  const char* bin = std::getenv("CGRAPH_CLI_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "CGRAPH_CLI_BIN must point at the built binary");
  return bin;
}

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(cli_bin()) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliRun r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

json run_json(const std::string& args) {
  const CliRun r = run_cli(args);
  REQUIRE_MESSAGE(r.status == 0, "command failed: " << args);
  return json::parse(r.out);
}

std::filesystem::path work_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("cgraph_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path_of(const std::string& name) { return (work_dir() / name).string(); }

// Reports minus their timing block: everything that must be reproducible.
std::string payload(json report) {
  report.erase("timing");
  return report.dump();
}

}  // namespace

TEST_CASE("gen writes a lattice and reports its exact shape") {
  const std::string out = path_of("lat.bin");
  const json r = run_json("gen --lattice 20x15 --seed 7 -o " + out);
  CHECK(r.at("schema") == "cgraph-report-v1");
  CHECK(r.at("algorithm") == "gen");
  CHECK(r.at("graph").at("n") == 300);
  CHECK(r.at("graph").at("m") == 600);  // oriented torus: two arcs per cell
  CHECK(r.at("params").at("kind") == "lattice");
  CHECK(r.at("params").at("rows") == 20);
  CHECK(r.at("params").at("cols") == 15);
  CHECK(r.at("result").at("path") == out);
  CHECK(std::filesystem::exists(out));
}

TEST_CASE("gen writes a random digraph with the requested size") {
  const std::string out = path_of("rand.bin");
  const json r = run_json("gen --random 100,300 --seed 3 -o " + out);
  CHECK(r.at("graph").at("n") == 100);
  CHECK(r.at("graph").at("m") == 300);
  CHECK(r.at("params").at("kind") == "random");
  CHECK(std::filesystem::exists(out));
}

TEST_CASE("convert round-trips a graph through the text encoding") {
  const std::string bin0 = path_of("rt.bin");
  const std::string txt = path_of("rt.txt");
  const std::string bin1 = path_of("rt2.bin");
  run_json("gen --random 80,240 --seed 5 -o " + bin0);
  const json c1 = run_json("convert " + bin0 + " -o " + txt);
  CHECK(c1.at("algorithm") == "convert");
  run_json("convert " + txt + " -o " + bin1);

  const json a = run_json("scc " + bin0 + " --engine seq");
  const json b = run_json("scc " + bin1 + " --engine seq");
  CHECK(a.at("graph").at("n") == b.at("graph").at("n"));
  CHECK(a.at("graph").at("m") == b.at("graph").at("m"));
  CHECK(a.at("result") == b.at("result"));
}

TEST_CASE("parallel and sequential engines agree on strong components") {
  const std::string lat = path_of("scc_lat.bin");
  run_json("gen --lattice 30x12 --seed 9 -o " + lat);
  const json par = run_json("scc " + lat + " --tau 512 --threads 2");
  const json seq = run_json("scc " + lat + " --engine seq");
  CHECK(par.at("result").at("num_sccs") == seq.at("result").at("num_sccs"));
  CHECK(par.at("result").at("largest_scc") == seq.at("result").at("largest_scc"));
  CHECK(par.at("result").at("partition_hash") == seq.at("result").at("partition_hash"));
  CHECK(par.at("engine") == "par");
  CHECK(seq.at("engine") == "seq");
  CHECK(seq.at("params").at("threads") == 1);
}

TEST_CASE("parallel and sequential engines agree on connected components") {
  const std::string g = path_of("cc_rand.bin");
  run_json("gen --random 400,900 --seed 13 --sym -o " + g);
  const json par = run_json("cc " + g + " --threads 2");
  const json seq = run_json("cc " + g + " --engine seq");
  CHECK(par.at("result").at("num_components") == seq.at("result").at("num_components"));
  CHECK(par.at("result").at("partition_hash") == seq.at("result").at("partition_hash"));
}

TEST_CASE("parallel and sequential engines agree on biconnected components") {
  const std::string g = path_of("bcc_rand.bin");
  run_json("gen --random 200,350 --seed 17 --sym -o " + g);
  const json par = run_json("bcc " + g + " --threads 2");
  const json seq = run_json("bcc " + g + " --engine seq");
  CHECK(par.at("result").at("num_bccs") == seq.at("result").at("num_bccs"));
  CHECK(par.at("result").at("articulation_points") ==
        seq.at("result").at("articulation_points"));
  CHECK(par.at("result").at("bridges") == seq.at("result").at("bridges"));
  CHECK(par.at("result").at("bcc_hash") == seq.at("result").at("bcc_hash"));
}

TEST_CASE("parallel and sequential engines agree on elimination lists") {
  const std::string g = path_of("lel_rand.bin");
  run_json("gen --random 300,500 --seed 19 --sym -o " + g);
  const json par = run_json("lelists " + g + " --priority-seed 4 --threads 2");
  const json seq = run_json("lelists " + g + " --priority-seed 4 --engine seq");
  CHECK(par.at("result").at("entries") == seq.at("result").at("entries"));
  CHECK(par.at("result").at("lists_hash") == seq.at("result").at("lists_hash"));
  CHECK(par.at("params").at("priority_seed") == 4);
}

TEST_CASE("single-threaded runs are reproducible byte for byte") {
  const std::string lat = path_of("det_lat.bin");
  run_json("gen --lattice 16x16 --scheme sampled --seed 23 -o " + lat);
  for (const char* cmd : {"scc ", "cc --symmetrize ", "bcc --symmetrize ",
                          "lelists --symmetrize "}) {
    const std::string full = cmd + lat + " --threads 1 --seed 5";
    const json a = run_json(full);
    const json b = run_json(full);
    CHECK(payload(a) == payload(b));
  }
}

TEST_CASE("forced dense and forced sparse frontiers give one answer") {
  const std::string g = path_of("densify.bin");
  run_json("gen --random 500,1500 --seed 29 -o " + g);
  const json dense = run_json("scc " + g + " --densify dense --threads 1");
  const json sparse = run_json("scc " + g + " --densify sparse --threads 1");
  CHECK(dense.at("result") == sparse.at("result"));
}

TEST_CASE("round comparison reports both engines' round counts") {
  const std::string lat = path_of("cmp_lat.bin");
  run_json("gen --lattice 40x40 --seed 31 -o " + lat);
  const json r = run_json("scc " + lat + " --tau 512 --compare-rounds");
  const json& cmp = r.at("details").at("compare_rounds");
  CHECK(cmp.at("vgc").at("first_fwd_rounds").get<std::uint64_t>() > 0);
  CHECK(cmp.at("plain").at("first_fwd_rounds").get<std::uint64_t>() >=
        cmp.at("vgc").at("first_fwd_rounds").get<std::uint64_t>());
}

TEST_CASE("parameters are echoed back in the report") {
  const std::string g = path_of("echo.bin");
  run_json("gen --random 50,100 --seed 37 -o " + g);
  const json r = run_json("scc " + g + " --tau 7 --theta 9 --lambda 2048 --threads 1 "
                          "--pivot random --seed 41");
  const json& p = r.at("params");
  CHECK(p.at("tau") == 7);
  CHECK(p.at("theta") == 9);
  CHECK(p.at("lambda") == 2048);
  CHECK(p.at("threads") == 1);
  CHECK(p.at("pivot") == "random");
  CHECK(p.at("seed") == 41);
  CHECK(p.at("vgc") == true);
}

TEST_CASE("elimination lists can be written in both encodings") {
  const std::string g = path_of("lel_out.bin");
  run_json("gen --lattice 8x8 --seed 43 --sym -o " + g);

  const std::string lbin = path_of("lists.lbin");
  const json rb = run_json("lelists " + g + " -o " + lbin);
  CHECK(rb.at("result").at("output") == lbin);
  std::ifstream fb(lbin, std::ios::binary);
  char magic[4] = {};
  fb.read(magic, 4);
  CHECK(std::string(magic, 4) == "LEL1");

  const std::string ltxt = path_of("lists.txt");
  run_json("lelists " + g + " -o " + ltxt);
  std::ifstream ft(ltxt);
  std::string first_line;
  std::getline(ft, first_line);
  CHECK(first_line.rfind("0:", 0) == 0);
  CHECK(first_line.find("(") != std::string::npos);
}

TEST_CASE("the budget sweep reports one record per budget value") {
  const std::string lat = path_of("bench_lat.bin");
  run_json("gen --lattice 24x24 --seed 47 -o " + lat);
  const json r = run_json("bench " + lat + " --algo scc --taus 1,4 --repeat 1");
  CHECK(r.at("algorithm") == "bench");
  CHECK(r.at("result").at("algo") == "scc");
  const json& runs = r.at("result").at("runs");
  REQUIRE(runs.size() == 2);
  CHECK(runs[0].at("tau") == 1);
  CHECK(runs[1].at("tau") == 4);
  for (const json& entry : runs) {
    CHECK(entry.at("wall_s").get<double>() >= 0.0);
    CHECK(entry.contains("rounds"));
    CHECK(entry.contains("relative_to_tau1"));
  }
}

TEST_CASE("bad invocations exit nonzero") {
  CHECK(run_cli("frobnicate").status != 0);
  CHECK(run_cli("gen -o " + path_of("none.bin")).status != 0);  // no source given
  CHECK(run_cli("gen --lattice 4x4 --random 5,5 -o " + path_of("both.bin")).status != 0);
  CHECK(run_cli("scc").status != 0);                       // missing input
  CHECK(run_cli("scc /nonexistent/graph.bin").status != 0);
  CHECK(run_cli("scc --engine warp " + path_of("lat.bin")).status != 0);
  CHECK(run_cli("gen --lattice 4by4 -o " + path_of("bad.bin")).status != 0);
}
