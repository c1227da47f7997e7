// Exercises the shared library through its C surface only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>

#include "croann.h"

namespace {

const std::string kDataDir = std::string(CROANN_SOURCE_DIR) + "/data";

std::string tiny_config_text() {
    return "run.name = iris\n"
           "dataset.path = " + kDataDir + "/iris.data\n" +
           "dataset.attribute_columns = 0-3\n"
           "dataset.label_column = 4\n"
           "dataset.n_train = 75\ndataset.n_val = 37\ndataset.n_test = 38\n"
           "cro.fe_limit = 600\ntrials.count = 2\n";
}

std::string fresh_dir(const char* name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    return dir.string();
}

}  // namespace

TEST_CASE("version and status names") {
    CHECK(croann_version() == std::string("0.1.0"));
    CHECK(croann_status_name(CROANN_OK) == std::string("ok"));
    CHECK(croann_status_name(CROANN_ERR_IO) == std::string("io_error"));
}

TEST_CASE("null arguments are rejected") {
    CHECK(croann_config_load(nullptr, nullptr) == CROANN_ERR_INVALID_ARGUMENT);
    CHECK(croann_train(nullptr, "x", 1) == CROANN_ERR_INVALID_ARGUMENT);
    CHECK(croann_report(nullptr, nullptr) == CROANN_ERR_INVALID_ARGUMENT);
}

TEST_CASE("config parse, get, set and error reporting") {
    croann_config* config = nullptr;
    REQUIRE(croann_config_parse(tiny_config_text().c_str(), &config) == CROANN_OK);
    REQUIRE(config != nullptr);

    char buf[128];
    CHECK(croann_config_get(config, "cro.pop_size", buf, sizeof(buf)) == CROANN_OK);
    CHECK(std::string(buf) == "20");

    CHECK(croann_config_set(config, "cro.pop_size", "10") == CROANN_OK);
    CHECK(croann_config_get(config, "cro.pop_size", buf, sizeof(buf)) == CROANN_OK);
    CHECK(std::string(buf) == "10");

    CHECK(croann_config_set(config, "cro.pop_size", "bogus") == CROANN_ERR_CONFIG);
    CHECK(std::string(croann_last_error()).find("cro.pop_size") != std::string::npos);

    CHECK(croann_config_get(config, "no.such", buf, sizeof(buf)) ==
          CROANN_ERR_INVALID_ARGUMENT);
    char tiny[2];
    CHECK(croann_config_get(config, "dataset.path", tiny, sizeof(tiny)) ==
          CROANN_ERR_INVALID_ARGUMENT);

    croann_config_free(config);
}

TEST_CASE("malformed config text maps to CROANN_ERR_CONFIG") {
    croann_config* config = nullptr;
    CHECK(croann_config_parse("definitely not = valid\n", &config) == CROANN_ERR_CONFIG);
    CHECK(config == nullptr);
    CHECK(std::strlen(croann_last_error()) > 0);
}

TEST_CASE("train, report and the error paths") {
    croann_config* config = nullptr;
    REQUIRE(croann_config_parse(tiny_config_text().c_str(), &config) == CROANN_OK);

    const std::string out_dir = fresh_dir("croann_capi_run");
    REQUIRE(croann_train(config, out_dir.c_str(), 2) == CROANN_OK);
    CHECK(std::filesystem::exists(std::filesystem::path(out_dir) / "trials.csv"));
    CHECK(std::filesystem::exists(std::filesystem::path(out_dir) / "summary.csv"));
    CHECK(std::filesystem::exists(std::filesystem::path(out_dir) / "manifest.txt"));

    char* markdown = nullptr;
    REQUIRE(croann_report(out_dir.c_str(), &markdown) == CROANN_OK);
    REQUIRE(markdown != nullptr);
    CHECK(std::string(markdown).find("published") != std::string::npos);
    croann_string_free(markdown);

    // missing dataset -> io error with the path in the message
    REQUIRE(croann_config_set(config, "dataset.path", "/nonexistent/iris.data") == CROANN_OK);
    CHECK(croann_train(config, fresh_dir("croann_capi_run2").c_str(), 1) == CROANN_ERR_IO);
    CHECK(std::string(croann_last_error()).find("/nonexistent/iris.data") != std::string::npos);

    croann_config_free(config);
}

TEST_CASE("sweep over the C surface") {
    croann_config* config = nullptr;
    REQUIRE(croann_config_parse(tiny_config_text().c_str(), &config) == CROANN_OK);
    const char* values[] = {"0.05", "0.2"};
    const std::string out_dir = fresh_dir("croann_capi_sweep");
    REQUIRE(croann_sweep(config, "op.gaussian_variance", values, 2, out_dir.c_str(), 2) ==
            CROANN_OK);
    CHECK(std::filesystem::exists(std::filesystem::path(out_dir) / "sweep.csv"));

    CHECK(croann_sweep(config, "net.alpha", values, 2, out_dir.c_str(), 1) ==
          CROANN_ERR_CONFIG);
    croann_config_free(config);
}
