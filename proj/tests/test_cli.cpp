#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "limlab/cli.hpp"

using namespace limlab;

namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("limlab_cli_" + std::string(::testing::UnitTest::GetInstance()
                                                                             ->current_test_info()
                                                                             ->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string file(const std::string& name, const std::string& text) const {
        const fs::path path = dir_ / name;
        std::ofstream(path) << text;
        return path.string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "limlab");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        out_.str("");
        err_.str("");
        return run_cli(static_cast<int>(argv.size()), argv.data(), out_, err_);
    }

    fs::path dir_;
    std::ostringstream out_, err_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Serialize, WeightRoundTrip) {
    const std::vector<WeightSpec> specs{
        WeightSpec::constant(2, 1.5), WeightSpec::power(3, -0.5), WeightSpec::corridor(3, 1.0, 0.5),
        WeightSpec::half_line_power(3, 0.5), WeightSpec::radial(3, RadialProfile::sinusoid(2.0, 1.0, 1.0)),
        WeightSpec::product(WeightSpec::power(2, 0.3), WeightSpec::constant(1))};
    for (const auto& w : specs) {
        const Json doc = weight_to_json(w);
        EXPECT_EQ(weight_to_json(weight_from_json(doc)).dump(), doc.dump()) << doc.dump();
    }
}

TEST(Serialize, FunctionRoundTrip) {
    for (const auto& fn : {loglog_function(3), axis_chain(3, 2, 10), TestFunction::constant(2, 4.0)}) {
        const Json doc = function_to_json(fn);
        EXPECT_EQ(function_to_json(function_from_json(doc)).dump(), doc.dump());
    }
}

TEST(Serialize, RejectsMalformedWeight) {
    EXPECT_THROW(weight_from_json(Json::parse(R"({"kind":"power","d":3,"params":{}})")), SpecError);
    EXPECT_THROW(weight_from_json(Json::parse(R"({"kind":"nope","d":3,"params":{}})")), SpecError);
}

TEST_F(CliTest, ClassifyPredictions) {
    const struct {
        double alpha;
        const char* radial;
        const char* vertical;
    } cases[] = {{-0.5, "YES", "NOT_GUARANTEED"}, {0.5, "YES", "YES"}, {-1.0, "NO", "NO"}};
    for (const auto& c : cases) {
        const std::string w =
            file("w.json", R"({"kind":"power","d":3,"params":{"alpha":)" + std::to_string(c.alpha) + "}}");
        ASSERT_EQ(run({"classify", "--weight", w, "--p", "2"}), kExitOk) << err_.str();
        const Json report = Json::parse(out_.str());
        EXPECT_EQ(report.at("schema_version"), 1);
        EXPECT_EQ(report.at("run_config").at("command"), "classify");
        const Json& pred = report.at("result").at("predictions");
        EXPECT_EQ(pred.at("radial_limits"), c.radial) << "alpha=" << c.alpha;
        EXPECT_EQ(pred.at("vertical_limits"), c.vertical) << "alpha=" << c.alpha;
        EXPECT_NE(err_.str().find("classify: ok in "), std::string::npos);
    }
}

TEST_F(CliTest, TraceCsvAndReplay) {
    const std::string fn = file("f.json", R"({"kind":"axis_chain","d":3,"params":{"i_min":2,"i_max":60}})");
    const std::string csv = path("trace.csv");
    ASSERT_EQ(run({"trace", "--function", fn, "--vertical", "0,0", "--out", csv}), kExitOk) << err_.str();
    const std::string text = slurp(csv);
    EXPECT_EQ(text.rfind("# schema_version=1 artifact_version=1.0.0\n# run_config=", 0), 0u);
    EXPECT_NE(text.find("verdict=Oscillating"), std::string::npos);
    EXPECT_EQ(run({"replay", csv}), kExitOk) << err_.str();
    std::ofstream(csv, std::ios::app) << "1,2\n";
    EXPECT_EQ(run({"replay", csv}), kExitFailure);
}

TEST_F(CliTest, TraceConstantAndLogLog) {
    const std::string c = file("c.json", R"({"kind":"constant","d":2,"params":{"c":3}})");
    ASSERT_EQ(run({"trace", "--function", c, "--ray", "1,1"}), kExitOk);
    EXPECT_NE(out_.str().find("verdict=Converged limit=3 "), std::string::npos);
    const std::string ll = file("ll.json", R"({"kind":"loglog","d":3,"params":{}})");
    ASSERT_EQ(run({"trace", "--function", ll, "--rays", "16"}), kExitOk);
    EXPECT_NE(out_.str().find("divergent_fraction=1 "), std::string::npos);
}

TEST_F(CliTest, ClassifyReplayIsIdentical) {
    const std::string w = file("w.json", R"({"kind":"constant","d":3,"params":{"c":1}})");
    const std::string report = path("r.json");
    ASSERT_EQ(run({"classify", "--weight", w, "--out", report}), kExitOk);
    EXPECT_TRUE(out_.str().empty());
    EXPECT_EQ(run({"replay", report}), kExitOk) << err_.str();
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run({"suite", "no-such-suite"}), kExitUsage);
    EXPECT_EQ(run({"classify"}), kExitUsage);
    const std::string fn = file("f.json", R"({"kind":"loglog","d":3,"params":{}})");
    EXPECT_EQ(run({"trace", "--function", fn, "--ray", "1,0,0", "--t-grid", "1:0.5:100"}), kExitUsage);
    EXPECT_EQ(run({"trace", "--function", fn, "--ray", "1,0,0", "--t-grid", "garbage"}), kExitUsage);
    EXPECT_EQ(run({"trace", "--function", fn}), kExitUsage);
    EXPECT_EQ(run({"replay", path("missing.json")}), kExitUsage);
}

TEST_F(CliTest, LemmaSuiteRefusesConvergentWeight) {
    const std::string w = file("w.json", R"({"kind":"power","d":3,"params":{"alpha":0.5}})");
    EXPECT_EQ(run({"suite", "lemma-3-5", "--weight", w}), kExitUsage);
    EXPECT_NE(err_.str().find("precondition"), std::string::npos);
}

TEST_F(CliTest, ScheduleStartingAtZeroIsRejected) {
    const std::string fn = file("f.json", R"({"kind":"inverse_radius","d":3,"params":{}})");
    EXPECT_EQ(run({"trace", "--function", fn, "--ray", "1,0,0", "--t-grid", "0:2:60"}), kExitUsage);
}
