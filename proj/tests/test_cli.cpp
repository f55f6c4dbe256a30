#include <graden/io.hpp>

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

struct Sandbox {
  fs::path dir;
  Sandbox() {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("graden_cli_" + std::to_string(rd()));
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }

  std::string slurp(const std::string& name) const {
    std::ifstream in(dir / name, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  Run run(const std::string& args, const std::string& env = "") const {
    const std::string cmd = "cd '" + dir.string() + "' && " + env + " '" + GRADEN_CLI_PATH + "' " + args +
                            " > stdout.txt 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp("stdout.txt"), slurp("stderr.txt")};
  }
};

}  // namespace

TEST_CASE("cli compute") {
  Sandbox box;
  std::ofstream(box.dir / "const.pgm") << "P2\n4 4\n255\n7 7 7 7\n7 7 7 7\n7 7 7 7\n7 7 7 7\n";
  auto r = box.run("compute --measure graden const.pgm");
  CHECK(r.code == 0);
  CHECK(r.out == "0.000000\n");

  REQUIRE(box.run("simulate noise --seed 4 --rows 40 --cols 40 --out noise.csv").code == 0);
  const auto q = box.run("compute --a 0.55 --b 0.8 noise.csv");
  const auto d = box.run("compute --delta 0.12566134685507416 --gamma 0.8416212335729143 noise.csv");
  const auto t = box.run("compute --delta 0.12566 --gamma 0.84162 noise.csv");
  CHECK(q.code == 0);
  CHECK(q.out == d.out);
  CHECK(std::abs(std::stod(q.out) - std::stod(t.out)) < 1e-6);

  r = box.run("compute --format json --out h.json noise.csv");
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(box.slurp("h.json"));
  CHECK(doc["histogram"].size() == 125);
  std::uint64_t total = 0;
  for (const auto& c : doc["histogram"]) total += c.get<std::uint64_t>();
  CHECK(total == 39 * 39);

  r = box.run("compute --measure sampen2d --m 1 --r 0.2 noise.csv");
  CHECK(r.code == 0);
  CHECK(r.out.size() > 3);
}

TEST_CASE("cli errors and exit codes") {
  Sandbox box;
  auto r = box.run("compute missing.pgm");
  CHECK(r.code == 1);
  CHECK(r.err.find("missing.pgm") != std::string::npos);
  CHECK(r.out.empty());
  CHECK(box.run("compute").code == 2);
  CHECK(box.run("frobnicate").code == 2);
  REQUIRE(box.run("simulate mix --p 0.3 --rows 20 --cols 20 --out m.pgm").code == 0);
  CHECK(box.run("compute --a 0.9 m.pgm").code == 2);
  CHECK(box.run("compute --a 0.6 --delta 0.1 --gamma 1 m.pgm").code == 2);
  CHECK(box.run("compute --measure nope m.pgm").code == 2);
  CHECK(box.run("noise-class --samples 2 --rows 10 --cols 10", "GRADEN_SEED=xyz").code == 2);
  std::ofstream(box.dir / "bad.txt") << "1\nxyz\n";
  r = box.run("compute --signal bad.txt");
  CHECK(r.code == 1);
  CHECK(r.err.find(":2:") != std::string::npos);
}

TEST_CASE("cli experiments write manifests that rerun identically") {
  Sandbox box;
  auto r = box.run("noise-class --samples 3 --rows 24 --cols 24 --out nc.csv", "GRADEN_SEED=9");
  REQUIRE(r.code == 0);
  const auto manifest = nlohmann::json::parse(box.slurp("nc.csv.manifest.json"));
  CHECK(manifest["seed"] == 9);
  CHECK(manifest["experiment"] == "noise-class");
  CHECK(manifest.contains("created"));
  CHECK(manifest["durations"].contains("run_seconds"));

  r = box.run("rerun nc.csv.manifest.json --out again.csv");
  REQUIRE(r.code == 0);
  CHECK(box.slurp("again.csv") == box.slurp("nc.csv"));
  CHECK(box.slurp("again.summary.csv") == box.slurp("nc.summary.csv"));

  r = box.run("noise-class --samples 3 --rows 24 --cols 24 --seed 10 --out other.csv");
  CHECK(box.slurp("other.csv") != box.slurp("nc.csv"));

  auto edited = manifest;
  edited["comment"] = "hello";
  std::ofstream(box.dir / "extra.json") << edited.dump();
  r = box.run("rerun extra.json --out extra.csv");
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(box.slurp("extra.csv") == box.slurp("nc.csv"));

  edited.erase("seed");
  std::ofstream(box.dir / "noseed.json") << edited.dump();
  r = box.run("rerun noseed.json --out x.csv");
  CHECK(r.code == 1);
  CHECK(r.err.find("seed") != std::string::npos);
}

TEST_CASE("cli subcommands run at small scale") {
  Sandbox box;
  CHECK(box.run("sweep --rows 20 --cols 20 --a-start 0.55 --a-stop 0.56 --b-start 0.8 --b-stop 0.8 --out s.csv").code == 0);
  CHECK(box.slurp("s.csv").find("0.55,0.8") != std::string::npos);
  CHECK(box.run("sweep --a-start 0.4 --out s.csv").code == 2);
  CHECK(box.run("robustness --kind size --sizes 12,16 --samples 2 --colors white --measure graden --out r.csv").code == 0);
  CHECK(fs::exists(box.dir / "r.cv.csv"));
  CHECK(box.run("robustness --kind mix --p 0.5 --variances 0.01 --samples 2 --rows 12 --cols 12 --measure graden,peren2d "
                "--out mr.csv").code == 0);
  CHECK(fs::exists(box.dir / "mr.cv_by_p.csv"));
  CHECK(box.run("logistic --a-start 3.9 --a-stop 3.92 --measure graden --format json --out l.json").code == 0);
  CHECK(nlohmann::json::parse(box.slurp("l.json"))["observations"]["rows"].size() == 3);
  CHECK(box.run("bench --sizes 10 --repeats 1 --measure graden --out b.csv").code == 0);
  CHECK(box.run("classify --pipeline mix --samples 3 --rows 16 --cols 16 --out c.csv").code == 0);
  CHECK(box.slurp("c.effects.csv").find("mix_p=0.2") != std::string::npos);
  CHECK(box.run("classify --pipeline image --out c.csv").code == 2);
  CHECK(box.run("simulate logistic --a 3.2 --n 5 --out x.txt").code == 0);
  CHECK(box.run("simulate distance --a 3.9 --n 40 --out d.png").code == 0);
  CHECK(box.run("compute d.png").code == 0);

  fs::create_directories(box.dir / "data/a");
  fs::create_directories(box.dir / "data/b");
  for (int k = 0; k < 3; ++k) {
    box.run("simulate noise --color red --rows 20 --cols 20 --seed " + std::to_string(k) + " --out data/a/" +
            std::to_string(k) + ".pgm");
    box.run("simulate noise --color white --rows 20 --cols 20 --seed " + std::to_string(k) + " --out data/b/" +
            std::to_string(k) + ".png");
  }
  std::ofstream(box.dir / "data/b/broken.pgm") << "P5\n9 9\n255\n";
  auto r = box.run("classify --pipeline image --dataset data --target-rows 16 --target-cols 16 --out img.csv");
  CHECK(r.code == 0);
  CHECK(fs::exists(box.dir / "img.failures.csv"));

  fs::create_directories(box.dir / "sig/x");
  {
    std::ofstream s(box.dir / "sig/x/s.txt");
    for (int i = 0; i < 400; ++i) s << std::sin(i * 0.3) << "\n";
  }
  r = box.run("classify --pipeline signal --dataset sig --signal-mode sliding --window 150 --step 50 --out sig.csv");
  CHECK(r.code == 0);
  CHECK(box.slurp("sig.csv").find("s.txt#4") != std::string::npos);
}
