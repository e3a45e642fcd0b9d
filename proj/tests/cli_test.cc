#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "swgain/gallery.hpp"
#include "swgain/system.hpp"

namespace swgain {
namespace cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("swgain_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    Write("scalar.json", R"({"n":1,"m":1,"p":1,"modes":[{"A":[[-1]],"B":[[1]],"C":[[1]]}]})");
    Write("nodes.json", serialize_system(rotated_nodes_system()));
    Write("const.json", R"({"segments":[[0, 10.0]]})");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }
  void Write(const std::string& name, const std::string& text) const {
    std::ofstream(Path(name)) << text;
  }
  std::string Read(const std::string& name) const {
    std::ifstream in(Path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  int Main(std::vector<std::string> args) const {
    args.insert(args.begin(), "swgain");
    std::vector<char*> argv;
    for (std::string& a : args) argv.push_back(a.data());
    return main_entry(static_cast<int>(argv.size()), argv.data());
  }

  fs::path dir_;
};

TEST_F(CliTest, RhoOnSingleMode) {
  ASSERT_EQ(Main({"rho", "--system", Path("scalar.json"), "--tau", "0.5", "--out", Path("r.json")}),
            kExitOk);
  const auto j = nlohmann::json::parse(Read("r.json"));
  EXPECT_NEAR(j["lower"].get<double>(), std::exp(-1.0), 1e-9);
  EXPECT_NEAR(j["upper"].get<double>(), std::exp(-1.0), 1e-9);
  EXPECT_DOUBLE_EQ(j["tau"].get<double>(), 0.5);
}

TEST_F(CliTest, GainIsDeterministicAcrossRunsAndThreads) {
  RunConfig cfg;
  cfg.subcommand = "gain";
  cfg.system_path = Path("nodes.json");
  cfg.class_name = "dwell";
  cfg.tau = 0.5;
  cfg.T = 3.0;
  cfg.max_switches = 3;
  cfg.grid_step = 0.5;
  cfg.out_path = Path("a.json");
  ASSERT_EQ(run(cfg), kExitOk);
  cfg.out_path = Path("b.json");
  cfg.threads = 2;
  ASSERT_EQ(run(cfg), kExitOk);
  EXPECT_EQ(Read("a.json"), Read("b.json"));
  const auto j = nlohmann::json::parse(Read("a.json"));
  EXPECT_EQ(j["method"], "search");
  EXPECT_TRUE(j["witness_signal"].contains("segments"));
}

TEST_F(CliTest, GainForSignalWithCrossCheck) {
  ASSERT_EQ(Main({"gain", "--system", Path("scalar.json"), "--signal", Path("const.json"),
                  "--power-step", "0.1", "--out", Path("g.json")}),
            kExitOk);
  const auto j = nlohmann::json::parse(Read("g.json"));
  EXPECT_LE(j["witness_input_energy_ratio"].get<double>(),
            j["value"].get<double>() + j["tolerance"].get<double>());
  EXPECT_DOUBLE_EQ(j["T"].get<double>(), 10.0);
}

TEST_F(CliTest, SweepCsv) {
  ASSERT_EQ(Main({"gain", "--system", Path("nodes.json"), "--taus", "0.5,1.0", "--sweep-T",
                  "1,2", "--max-switches", "2", "--out", Path("s.csv")}),
            kExitOk);
  const std::string csv = Read("s.csv");
  EXPECT_EQ(csv.substr(0, 17), "tau,T,gain_lower\n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST_F(CliTest, MinrealReport) {
  Write("ex.json", serialize_system(example_system(4.5)));
  ASSERT_EQ(Main({"minreal", "--system", Path("ex.json"), "--out", Path("m.json")}), kExitOk);
  const auto j = nlohmann::json::parse(Read("m.json"));
  EXPECT_EQ(j["n"], 3);
  EXPECT_EQ(j["n_min"], 3);
  EXPECT_EQ(j["verdict"], "not_uniformly_observable");
}

TEST_F(CliTest, FinitenessExitCodes) {
  EXPECT_EQ(Main({"finiteness", "--system", Path("nodes.json"), "--class", "dwell", "--tau",
                  "1.2", "--out", Path("f.json")}),
            kExitOk);
  EXPECT_EQ(nlohmann::json::parse(Read("f.json"))["verdict"], "finite");
}

TEST_F(CliTest, Gallery) {
  ASSERT_EQ(Main({"gallery", "--alpha-star", "--out", Path("a.json")}), kExitOk);
  EXPECT_NEAR(nlohmann::json::parse(Read("a.json"))["alpha_star"].get<double>(), 4.5047, 1e-3);
  ASSERT_EQ(Main({"gallery", "--emit-example", "--alpha", "5", "--out", Path("e.json")}), kExitOk);
  EXPECT_EQ(parse_system(Read("e.json")).num_modes(), 3);
  ASSERT_EQ(Main({"gallery", "--orbit", "--out", Path("o.csv")}), kExitOk);
  EXPECT_EQ(Read("o.csv").substr(0, 13), "theta,radius\n");
  EXPECT_EQ(Main({"gallery", "--orbit", "--verify"}), kExitError);
}

TEST_F(CliTest, Errors) {
  EXPECT_EQ(Main({"rho", "--system", Path("missing.json")}), kExitError);
  EXPECT_EQ(Main({"rho", "--system", Path("scalar.json"), "--class", "bogus"}), kExitError);
  EXPECT_EQ(Main({"rho", "--system", Path("scalar.json"), "--class", "dwell", "--tau", "-1"}),
            kExitError);
  EXPECT_EQ(Main({"taumin", "--system", Path("nodes.json"), "--tau-lo", "1.0", "--tau-hi", "2.0"}),
            kExitError);
  EXPECT_EQ(Main({"nothing"}), kExitError);
}

}  // namespace
}  // namespace cli
}  // namespace swgain
