#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "opideal/amenable.hpp"
#include "opideal/cli.hpp"
#include "opideal/errors.hpp"
#include "opideal/io.hpp"
#include "support.hpp"

using namespace opideal;
using opideal::io::json;

namespace {

namespace fs = std::filesystem;

struct Invocation {
    int status;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "opideal");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("opideal_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text)
    {
        const auto path = (dir_ / name).string();
        std::ofstream(path) << text;
        return path;
    }
    std::string write_matrix(const std::string& name, const CMatrix& m)
    {
        return write(name, io::matrix_to_json(m).dump());
    }

    fs::path dir_;
};

} // namespace

TEST(Io, MatrixRoundTrip)
{
    Rng rng(111);
    const CMatrix m = random_gaussian(rng, 3, 4);
    EXPECT_EQ(io::matrix_from_json(io::matrix_to_json(m)), m);
    const json j = json::parse(R"({"rows": 2, "cols": 2, "data": [[1,0],[0,1],[2,-1],[3,0]]})");
    const CMatrix a = io::matrix_from_json(j);
    EXPECT_EQ(a(0, 1), Complex(0, 1));
    EXPECT_EQ(a(1, 0), Complex(2, -1));
}

TEST(Io, SchemaErrorsNameTheField)
{
    auto code_and_message = [](const char* text) -> std::pair<ErrorCode, std::string> {
        try {
            io::matrix_from_json(json::parse(text));
        } catch (const Error& e) {
            return {e.code(), e.what()};
        }
        return {ErrorCode::InvalidInput, ""};
    };
    auto [c1, m1] = code_and_message(R"({"cols": 1, "data": [[1,0]]})");
    EXPECT_EQ(c1, ErrorCode::Schema);
    EXPECT_NE(m1.find("rows"), std::string::npos);
    auto [c2, m2] = code_and_message(R"({"rows": 1, "cols": 1, "data": [[1]]})");
    EXPECT_EQ(c2, ErrorCode::Schema);
    EXPECT_NE(m2.find("data"), std::string::npos);
}

TEST(Io, FlagGroupFunctionalStructure)
{
    Rng rng(112);
    const Flag f(random_unitary(rng, 4), {1, 4});
    EXPECT_TRUE(io::flag_from_json(io::flag_to_json(f)) == f);
    const auto g = quaternion_group();
    EXPECT_TRUE(io::group_from_json(io::group_to_json(g)) == g);
    const auto mu = io::functional_from_json(json::parse(R"({"weights": [0.5, [0.25, 1], 0]})"));
    EXPECT_EQ(mu.weights(1), Complex(0.25, 1));
    const auto [type, s] = io::structure_from_json(json::parse(R"({"type": "AIII", "n": 4, "split": [1, 3]})"));
    EXPECT_EQ(type, ClassicalType::AIII);
    EXPECT_EQ(s.split->n_minus, 3);
    EXPECT_THROW(io::group_from_json(json::parse(R"({"order": 2, "table": [[0,1],[1,1]]})")), Error);
}

TEST(Io, SequenceCsv)
{
    const auto v = io::parse_sequence_csv("3\n# comment\n\n2.5\n0\n");
    EXPECT_EQ(v, (std::vector<double>{3, 2.5, 0}));
    EXPECT_THROW(io::parse_sequence_csv("1\nabc\n"), Error);
    EXPECT_THROW(io::parse_sequence_csv("-1\n"), Error);
}

TEST_F(CliTest, NormReport)
{
    CMatrix m(2, 2);
    m << 3, 0, 0, 4;
    const auto r = invoke({"norm", "--phi", "schatten:2", "--matrix", write_matrix("m.json", m)});
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_DOUBLE_EQ(json::parse(r.out)["norm"].get<double>(), 5.0);
}

TEST_F(CliTest, BoydSchatten4)
{
    const auto r = invoke({"boyd", "--phi", "schatten:4", "--mmax", "16"});
    ASSERT_EQ(r.status, 0);
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["p_hat"].get<double>(), 4, 0.05);
    EXPECT_NEAR(j["q_hat"].get<double>(), 4, 0.05);
}

TEST_F(CliTest, ExperimentCsv)
{
    const auto r = invoke({"experiment", "truncation-growth", "--phi", "schatten:1", "--sizes", "4,8",
                           "--trials", "10", "--seed", "7"});
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("n,ratio\n4,", 0), 0u);
    const auto again = invoke({"experiment", "truncation-growth", "--phi", "schatten:1", "--sizes", "4,8",
                               "--trials", "10", "--seed", "7"});
    EXPECT_EQ(r.out, again.out);
}

TEST_F(CliTest, FactorAndGroupSubcommands)
{
    Rng rng(113);
    const auto a = write_matrix("a.json", opideal::testing::random_hpd(rng, 4));
    const auto g = write_matrix("g.json", random_gaussian(rng, 4, 4));
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"ldl-nest", "--matrix", a, "--cuts", "2,4"},
          {"qr-nest", "--matrix", g},
          {"iwasawa", "--matrix", g},
          {"hc", "--matrix", g, "--split", "2,2"},
          {"truncate", "--matrix", g, "--cuts", "1,4"},
          {"integral", "--matrix", g},
          {"svalues", "--matrix", g}}) {
        const auto r = invoke(args);
        ASSERT_EQ(r.status, 0) << args[0] << ": " << r.out;
        const auto j = json::parse(r.out);
        if (j.contains("residual")) EXPECT_LE(j["residual"].get<double>(), 1e-10) << args[0];
    }
    for (const char* name : {"mean", "gns"}) {
        const auto r = invoke({name, "--group", "q8"});
        ASSERT_EQ(r.status, 0) << name;
    }
    const auto mu = write("mu.json", R"({"weights": [0, 1, 0, 0, 0, 0]})");
    const auto nu = write("nu.json", R"({"weights": [0, 0, 1, 0, 0, 0]})");
    const auto r = invoke({"arens", "--group", "z6", "--mu", mu, "--nu", nu});
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(json::parse(r.out)["product"]["weights"][3][0].get<double>(), 1.0);
}

TEST_F(CliTest, CartanWithSplit)
{
    const auto s = StructureData::standard(ClassicalType::AIII, 4, Signature{2, 2});
    const auto g = write_matrix("g.json", random_group_element(ClassicalType::AIII, s, 3));
    const auto r = invoke({"cartan", "--type", "AIII", "--split", "2,2", "--matrix", g});
    ASSERT_EQ(r.status, 0) << r.out;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j["k_in_group"].get<bool>());
    EXPECT_TRUE(j["x_in_algebra"].get<bool>());
}

TEST_F(CliTest, DualNorm)
{
    const auto seq = write("eta.csv", "4\n3\n");
    const auto r = invoke({"dualnorm", "--phi", "schatten:2", "--sequence", seq});
    ASSERT_EQ(r.status, 0);
    EXPECT_NEAR(json::parse(r.out)["closed_form"].get<double>(), 5.0, 1e-12);
}

TEST_F(CliTest, ModuleErrorIsStructured)
{
    CMatrix b(2, 2);
    b << 1, 2, 2, 1;
    const auto r = invoke({"ldl-nest", "--matrix", write_matrix("b.json", b)});
    EXPECT_EQ(r.status, 1);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["error"]["code"], "not_positive_definite");
    EXPECT_NEAR(j["error"]["quantity"].get<double>(), -1.0, 1e-12);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, SchemaErrorNamesField)
{
    const auto r = invoke({"norm", "--matrix", write("bad.json", R"({"rows": 1, "data": []})")});
    EXPECT_EQ(r.status, 1);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["error"]["code"], "schema");
    EXPECT_NE(j["error"]["message"].get<std::string>().find("cols"), std::string::npos);
}

TEST_F(CliTest, UnknownAndMissingSubcommand)
{
    EXPECT_EQ(invoke({"frobnicate"}).status, 2);
    EXPECT_EQ(invoke({}).status, 2);
    EXPECT_EQ(invoke({"--help"}).status, 0);
    EXPECT_EQ(invoke({"norm", "--help"}).status, 0);
}

TEST_F(CliTest, OutputFile)
{
    CMatrix m = CMatrix::Identity(2, 2);
    const auto out = (dir_ / "report.json").string();
    const auto r = invoke({"svalues", "--matrix", write_matrix("m.json", m), "--output", out});
    ASSERT_EQ(r.status, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(json::parse(io::read_text_file(out))["singular_values"][0].get<double>(), 1.0);
}

TEST(CliDispatch, UnknownSubcommand)
{
    cli::RunConfig cfg;
    cfg.subcommand = "nope";
    const auto r = cli::dispatch(cfg);
    EXPECT_EQ(r.status, 2);
    EXPECT_EQ(json::parse(r.report)["error"]["code"], "unknown_subcommand");
}

TEST(CliDispatch, SeedDefault)
{
    ::unsetenv("OPIDEAL_SEED");
    EXPECT_EQ(cli::default_seed(), cli::kDefaultSeed);
    ::setenv("OPIDEAL_SEED", "42", 1);
    EXPECT_EQ(cli::default_seed(), 42u);
    ::unsetenv("OPIDEAL_SEED");
}

TEST(CliBinary, RunsAndIsDeterministic)
{
    const std::string cmd = std::string(OPIDEAL_CLI_PATH) +
                            " experiment truncation-growth --sizes 4 --trials 5 --seed 3 2>/dev/null";
    auto capture = [&] {
        std::string text;
        FILE* pipe = ::popen(cmd.c_str(), "r");
        char buf[256];
        while (pipe && std::fgets(buf, sizeof buf, pipe)) text += buf;
        const int status = pipe ? ::pclose(pipe) : -1;
        EXPECT_EQ(status, 0);
        return text;
    };
    const auto a = capture();
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, capture());
}
