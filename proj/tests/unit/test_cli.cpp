#include "doctest.h"

#include "npdisc/cli.hpp"

#include <sstream>

using namespace npdisc;

namespace {
int run(std::vector<std::string> args, std::string* out_text = nullptr)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (out_text) *out_text = out.str();
    return code;
}
}  // namespace

TEST_CASE("catalog and help exit cleanly")
{
    std::string text;
    CHECK(run({}, &text) == 0);
    for (const auto& r : cli::recipes()) CHECK(text.find(r.name) != std::string::npos);
    CHECK(run({"crossing", "--help"}, &text) == 0);
    CHECK(text.find("default 0.5") != std::string::npos);
}

TEST_CASE("exit codes")
{
    CHECK(run({"frobnicate"}) == cli::kUnknownRecipe);
    CHECK(run({"crossing", "r=abc"}) == cli::kMalformedParameter);
    CHECK(run({"crossing", "colour=red"}) == cli::kMalformedParameter);
    CHECK(run({"crossing", "r=0.5", "r=0.6"}) == cli::kMalformedParameter);
    CHECK(run({"crossing", "--seed", "-3"}) == cli::kMalformedParameter);
    CHECK(run({"crossing", "--out", "/nonexistent-dir/x.csv"}) == cli::kUnwritablePath);
    CHECK(run({"interp-extract", "N=3", "k_max=6"}) == cli::kRuntimeFailure);
}

TEST_CASE("both invocation forms produce the same table")
{
    std::string a, b;
    CHECK(run({"crossing", "x=1e-3", "--reproducible"}, &a) == 0);
    CHECK(run({"run", "recipe=crossing", "x=1e-3", "--reproducible"}, &b) == 0);
    CHECK(a == b);
    CHECK(a.find("timestamp") == std::string::npos);
    CHECK(a.find("# param x=1e-3") != std::string::npos);
}

TEST_CASE("timestamps appear unless reproducible")
{
    std::string a;
    CHECK(run({"crossing"}, &a) == 0);
    CHECK(a.find("timestamp=") != std::string::npos);
}

TEST_CASE("crossing recipe output parses")
{
    const auto t = cli::run_recipe({"crossing", {{"C", "5"}}, std::nullopt, 0, true});
    CHECK(t.number(0, "C") == 5.0);
    CHECK(t.number(0, "det") < 0.0);
}
