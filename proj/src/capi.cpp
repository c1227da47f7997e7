#include "croann.h"

#include <cstring>
#include <new>
#include <string>
#include <thread>

#include "commands.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "version.hpp"

struct croann_config {
    croann::cfg::RunConfig value;
};

namespace {

thread_local std::string g_last_error;

croann_status fail(croann_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

croann_status ok() {
    g_last_error.clear();
    return CROANN_OK;
}

// Maps the library's exception hierarchy onto status codes.
template <typename Fn>
croann_status guarded(Fn&& fn) {
    try {
        fn();
        return ok();
    } catch (const croann::ConfigError& e) {
        return fail(CROANN_ERR_CONFIG, e.what());
    } catch (const croann::IoError& e) {
        return fail(CROANN_ERR_IO, e.what());
    } catch (const croann::DataError& e) {
        return fail(CROANN_ERR_DATA, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(CROANN_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(CROANN_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(CROANN_ERR_INTERNAL, e.what());
    }
}

int effective_jobs(int jobs) {
    if (jobs > 0) return jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? int(hw) : 1;
}

}  // namespace

extern "C" {

const char* croann_version(void) { return croann::kVersion; }

const char* croann_status_name(croann_status status) {
    switch (status) {
        case CROANN_OK: return "ok";
        case CROANN_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case CROANN_ERR_CONFIG: return "config_error";
        case CROANN_ERR_IO: return "io_error";
        case CROANN_ERR_DATA: return "data_error";
        case CROANN_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* croann_last_error(void) { return g_last_error.c_str(); }

croann_status croann_config_load(const char* path, croann_config** out) {
    if (!path || !out) return fail(CROANN_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto* handle = new croann_config{croann::cfg::load_config_file(path)};
        *out = handle;
    });
}

croann_status croann_config_parse(const char* text, croann_config** out) {
    if (!text || !out) return fail(CROANN_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto* handle = new croann_config{croann::cfg::parse_config_text(text, "<string>")};
        *out = handle;
    });
}

croann_status croann_config_set(croann_config* config, const char* key, const char* value) {
    if (!config || !key || !value) return fail(CROANN_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { config->value = croann::cfg::with_override(config->value, key, value); });
}

croann_status croann_config_get(const croann_config* config, const char* key, char* buffer,
                                size_t buffer_size) {
    if (!config || !key || !buffer) return fail(CROANN_ERR_INVALID_ARGUMENT, "null argument");
    for (const auto& [k, v] : config->value.pairs) {
        if (k != key) continue;
        if (v.size() + 1 > buffer_size)
            return fail(CROANN_ERR_INVALID_ARGUMENT,
                        "buffer too small for key '" + k + "' (need " +
                            std::to_string(v.size() + 1) + " bytes)");
        std::memcpy(buffer, v.c_str(), v.size() + 1);
        return ok();
    }
    return fail(CROANN_ERR_INVALID_ARGUMENT, "unknown config key '" + std::string(key) + "'");
}

void croann_config_free(croann_config* config) { delete config; }

croann_status croann_train(const croann_config* config, const char* out_dir, int jobs) {
    if (!config || !out_dir) return fail(CROANN_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        croann::cmd::RunOptions options;
        options.out_dir = out_dir;
        options.jobs = effective_jobs(jobs);
        croann::cmd::train(config->value, options);
    });
}

croann_status croann_sweep(const croann_config* config, const char* parameter,
                           const char* const* values, size_t n_values, const char* out_dir,
                           int jobs) {
    if (!config || !parameter || !values || !out_dir)
        return fail(CROANN_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::vector<std::string> value_list;
        value_list.reserve(n_values);
        for (size_t i = 0; i < n_values; ++i) {
            if (!values[i]) throw std::invalid_argument("null sweep value");
            value_list.emplace_back(values[i]);
        }
        croann::cmd::RunOptions options;
        options.out_dir = out_dir;
        options.jobs = effective_jobs(jobs);
        croann::cmd::sweep(config->value, parameter, value_list, options);
    });
}

croann_status croann_report(const char* run_dir, char** out_markdown) {
    if (!run_dir || !out_markdown) return fail(CROANN_ERR_INVALID_ARGUMENT, "null argument");
    *out_markdown = nullptr;
    return guarded([&] {
        const std::string text = croann::cmd::report(run_dir);
        char* copy = new char[text.size() + 1];
        std::memcpy(copy, text.c_str(), text.size() + 1);
        *out_markdown = copy;
    });
}

void croann_string_free(char* s) { delete[] s; }

}  // extern "C"
