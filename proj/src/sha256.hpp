#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace croann {

/// Streaming SHA-256.
class Sha256 {
public:
    Sha256();
    void update(const void* data, std::size_t len);
    /// Finishes the digest and returns it as a lowercase hex string.
    std::string finish();

private:
    void process_block(const std::uint8_t* block);

    std::uint32_t state_[8];
    std::uint8_t buffer_[64];
    std::size_t buffered_ = 0;
    std::uint64_t total_bits_ = 0;
};

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);  // throws IoError

}  // namespace croann
