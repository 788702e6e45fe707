// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "testenv.hpp"

#include <unistd.h>

#include <fstream>
#include <sstream>

#include <solvkit/bytes.hpp>

namespace testsupport {

std::filesystem::path fixture_dir() { return std::filesystem::path(SOLVKIT_FIXTURE_DIR); }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw solvkit::Error("IoError", "cannot open " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw solvkit::Error("IoError", "cannot write " + path.string());
    out << content;
}

std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() /
               ("solvkit-test-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testsupport
