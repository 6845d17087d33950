#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fcrec/cli.hpp"
#include "fcrec/ratings.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace fcrec;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("fcrec_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct CaptureStream {
    std::ostream& stream;
    std::ostringstream buffer;
    std::streambuf* old;
    explicit CaptureStream(std::ostream& s) : stream(s), old(s.rdbuf(buffer.rdbuf())) {}
    ~CaptureStream() { stream.rdbuf(old); }
    std::string text() const { return buffer.str(); }
};

fs::path writeDataset(const TempDir& tmp) {
    std::vector<RatingEntry> entries;
    for (int u = 1; u <= 20; ++u)
        for (int i = 1; i <= 12; ++i)
            if ((u * 5 + i * 11) % 3 != 0)
                entries.push_back({u, i, Rating(1 + (u * 3 + i * 7) % 5)});
    const auto file = tmp.path / "ratings.tsv";
    saveMovieLens(RatingsMatrix::fromEntries(entries), file);
    return file;
}

int invoke(const std::vector<std::string>& args, std::string* out = nullptr,
           std::string* err = nullptr) {
    std::vector<const char*> argv{"fcrec"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    CaptureStream co(std::cout);
    CaptureStream ce(std::cerr);
    const int rc = runMain(int(argv.size()), argv.data());
    if (out)
        *out = co.text();
    if (err)
        *err = ce.text();
    return rc;
}

std::map<std::string, std::string> parseEcho(const std::string& text) {
    std::map<std::string, std::string> fields;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) != 0)
            continue;
        const auto colon = line.find(": ", 2);
        if (colon == std::string::npos)
            continue;
        fields[line.substr(2, colon - 2)] = line.substr(colon + 2);
    }
    return fields;
}

} // namespace

TEST_CASE("default run echoes the effective configuration") {
    TempDir tmp;
    const auto data = writeDataset(tmp);

    std::string out;
    const int rc = invoke({"run", "--data", data.string()}, &out);
    REQUIRE(rc == 0);

    const auto echo = parseEcho(out);
    CHECK(echo.at("methods") == "fcnhsmra,fnhsm,pearson,cosine,mw,hw");
    CHECK(echo.at("clusters") == "3");
    CHECK(echo.at("neighbors") == "50");
    CHECK(echo.at("fuzzifier") == "2.0000");
    CHECK(echo.at("folds") == "5");
    CHECK(echo.at("repetitions") == "5");
    CHECK(echo.at("topn") == "5,10,15,20,30");
    CHECK(echo.at("threshold") == "3");
    CHECK(echo.at("seed") == "42");
    CHECK(echo.at("clamp") == "on");
    CHECK(echo.at("model_cache") == "none");
    CHECK(echo.at("output") == "stdout");
    CHECK(echo.at("format") == "table");
    CHECK(echo.at("threads") == "auto");
    CHECK(echo.at("averaging") == "micro");
    CHECK(echo.at("singularity") == "pair-mean");
    CHECK(echo.at("fcm_tolerance") == "1e-4");
    CHECK(echo.at("fcm_max_iterations") == "100");

    // all six method blocks present in the table body
    for (const char* name : {"fcnhsmra", "fnhsm", "pearson", "cosine", "mw", "hw"})
        CHECK(out.find(std::string("== ") + name + " ==") != std::string::npos);
    CHECK(out.find("top-5") != std::string::npos);
    CHECK(out.find("avg") != std::string::npos);
}

TEST_CASE("option overrides flow through to the echo") {
    TempDir tmp;
    const auto data = writeDataset(tmp);

    std::string out;
    const int rc = invoke({"run", "--data", data.string(), "--method", "fcnhsmra", "--topn",
                           "5,10", "--seed", "7", "--clusters", "2", "--folds", "2",
                           "--repetitions", "2", "--neighbors", "10", "--no-clamp", "--threads",
                           "1", "--averaging", "macro"},
                          &out);
    REQUIRE(rc == 0);

    const auto echo = parseEcho(out);
    CHECK(echo.at("methods") == "fcnhsmra");
    CHECK(echo.at("topn") == "5,10");
    CHECK(echo.at("seed") == "7");
    CHECK(echo.at("clusters") == "2");
    CHECK(echo.at("neighbors") == "10");
    CHECK(echo.at("clamp") == "off");
    CHECK(echo.at("threads") == "1");
    CHECK(echo.at("averaging") == "macro");
    CHECK(out.find("== fnhsm ==") == std::string::npos);
}

TEST_CASE("invalid invocations exit nonzero without running") {
    TempDir tmp;
    const auto data = writeDataset(tmp);
    std::string out, err;

    CHECK(invoke({"run"}, &out, &err) != 0);                                    // --data required
    CHECK(invoke({}, &out, &err) != 0);                                         // subcommand required
    CHECK(invoke({"run", "--data", data.string(), "--clusters", "0"}) != 0);
    CHECK(invoke({"run", "--data", data.string(), "--folds", "1"}) != 0);
    CHECK(invoke({"run", "--data", data.string(), "--format", "xml"}) != 0);
    CHECK(invoke({"run", "--data", data.string(), "--averaging", "median"}) != 0);
    CHECK(invoke({"run", "--data", data.string(), "--fuzzifier", "1.0"}, &out, &err) == 1);
    CHECK(invoke({"run", "--data", data.string(), "--such-flag", "1"}) != 0);
    CHECK(invoke({"run", "--data", (tmp.path / "absent.tsv").string()}, &out, &err) == 2);
    CHECK(err.find("error:") != std::string::npos);
}

TEST_CASE("csv format emits one row per method, metric, and list size") {
    TempDir tmp;
    const auto data = writeDataset(tmp);

    std::string out;
    const int rc = invoke({"run", "--data", data.string(), "--format", "csv", "--method",
                           "fcnhsmra,pearson", "--topn", "1,2", "--folds", "2", "--repetitions",
                           "1", "--clusters", "2"},
                          &out);
    REQUIRE(rc == 0);

    std::istringstream in(out);
    std::string line;
    std::vector<std::string> rows;
    bool sawHeader = false;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0)
            continue;
        if (!sawHeader) {
            CHECK(line == "method,metric,topn,value,cells,excluded");
            sawHeader = true;
            continue;
        }
        rows.push_back(line);
    }
    REQUIRE(sawHeader);
    // 2 methods x (2 topn + avg) x 4 metrics
    REQUIRE(rows.size() == 2 * 3 * 4);
    CHECK(rows[0].rfind("fcnhsmra,mae,1,", 0) == 0);
    CHECK(rows[11].rfind("fcnhsmra,recall,avg,", 0) == 0);
    CHECK(rows[12].rfind("pearson,mae,1,", 0) == 0);
    for (const auto& row : rows)
        CHECK(std::count(row.begin(), row.end(), ',') == 5);
}

TEST_CASE("model cache leaves results unchanged and skips refitting when warm") {
    TempDir tmp;
    const auto data = writeDataset(tmp);
    const auto cacheFile = (tmp.path / "models.json").string();
    const std::vector<std::string> args{
        "run",       "--data", data.string(), "--method",      "fcnhsmra", "--topn", "1,2",
        "--folds",   "2",      "--clusters",  "2",             "--repetitions", "2",
        "--threads", "1",      "--model-cache", cacheFile};

    std::string cold, coldErr;
    REQUIRE(invoke(args, &cold, &coldErr) == 0);
    CHECK(fs::exists(cacheFile));
    CHECK(coldErr.empty());

    std::string warm, warmErr;
    REQUIRE(invoke(args, &warm, &warmErr) == 0);
    CHECK(warm == cold);
    CHECK(warmErr.empty()); // no refit warning

    // a different seed invalidates the cache with a warning, not a failure
    auto other = args;
    other.push_back("--seed");
    other.push_back("7");
    std::string refit, refitErr;
    REQUIRE(invoke(other, &refit, &refitErr) == 0);
    CHECK(refitErr.find("does not match") != std::string::npos);

    // cacheless run matches the cached one byte for byte
    std::vector<std::string> plain(args.begin(), args.end() - 2);
    std::string fresh;
    REQUIRE(invoke(plain, &fresh) == 0);
    auto stripEcho = [](const std::string& text) {
        std::istringstream in(text);
        std::string line, body;
        while (std::getline(in, line))
            if (line.rfind("# ", 0) != 0)
                body += line + '\n';
        return body;
    };
    CHECK(stripEcho(fresh) == stripEcho(cold));
}

TEST_CASE("report lands in the output file when requested") {
    TempDir tmp;
    const auto data = writeDataset(tmp);
    const auto outFile = (tmp.path / "report.txt").string();

    std::string out;
    REQUIRE(invoke({"run", "--data", data.string(), "--method", "pearson", "--topn", "1",
                    "--folds", "2", "--repetitions", "1", "--clusters", "2", "--output", outFile},
                   &out) == 0);
    CHECK(out.empty());
    std::ifstream in(outFile);
    REQUIRE(in.good());
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str().find("== pearson ==") != std::string::npos);

    const auto badOut = (tmp.path / "no_dir" / "report.txt").string();
    std::string err;
    CHECK(invoke({"run", "--data", data.string(), "--method", "pearson", "--topn", "1", "--folds",
                  "2", "--repetitions", "1", "--clusters", "2", "--output", badOut},
                 &out, &err) == 3);
}

TEST_CASE("installed binary runs end to end") {
    TempDir tmp;
    const auto data = writeDataset(tmp);
    const auto outFile = (tmp.path / "smoke.txt").string();

    const std::string ok = std::string(FCREC_BIN) + " run --data " + data.string() +
                           " --method pearson --topn 1,2 --folds 2 --repetitions 1" +
                           " --clusters 2 > " + outFile + " 2>/dev/null";
    int status = std::system(ok.c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 0);
    std::ifstream in(outFile);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str().find("== pearson ==") != std::string::npos);

    const std::string bad = std::string(FCREC_BIN) + " run --data " +
                            (tmp.path / "absent.tsv").string() + " >/dev/null 2>&1";
    status = std::system(bad.c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 2);
}
