#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <openssl/evp.h>

namespace levypop::cli {

/// %.12g rendering used for every number written to disk.
inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string sha256_hex(const std::string& bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
        throw std::runtime_error("sha256: digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// CSV table with a '#' metadata block.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    CsvTable& meta(const std::string& key, const std::string& value) {
        meta_.emplace_back(key, value);
        return *this;
    }
    CsvTable& meta(const std::string& key, double value) { return meta(key, fmt(value)); }

    /// Metadata lines copied from another block, e.g. the shared run description.
    CsvTable& meta(const std::vector<std::pair<std::string, std::string>>& block) {
        meta_.insert(meta_.end(), block.begin(), block.end());
        return *this;
    }

    CsvTable& row(const std::vector<std::string>& cells) {
        if (cells.size() != columns_.size()) throw std::logic_error("csv: row width does not match the header");
        rows_.push_back(cells);
        return *this;
    }
    CsvTable& row(const std::vector<double>& cells) {
        std::vector<std::string> s;
        s.reserve(cells.size());
        for (double v : cells) s.push_back(fmt(v));
        return row(s);
    }

    [[nodiscard]] std::string str() const {
        std::ostringstream os;
        for (const auto& [k, v] : meta_) os << "# " << k << ": " << v << '\n';
        join(os, columns_);
        for (const auto& r : rows_) join(os, r);
        return os.str();
    }

private:
    static void join(std::ostringstream& os, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
    }

    std::vector<std::string> columns_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::vector<std::string>> rows_;
};

/// Collects the files written by one run and emits the manifest.
class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    void write(const std::string& file_name, const std::string& content) {
        const auto path = dir_ / file_name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << content;
        out.close();
        if (!out) throw std::runtime_error("write failed: " + path.string());
        artifacts_.emplace_back(file_name, sha256_hex(content));
    }

    void write(const std::string& file_name, const CsvTable& table) { write(file_name, table.str()); }

    /// <stem>.manifest.ini: resolved config plus a [manifest] section with the
    /// subcommand, its target and one sha256 per artifact.
    void write_manifest(const std::string& stem, const std::string& resolved_ini, const std::string& subcommand,
                        const std::string& target) {
        std::ostringstream os;
        os << resolved_ini << "\n[manifest]\n";
        os << "subcommand = " << subcommand << '\n';
        os << "target = " << target << '\n';
        os << "artifacts = " << artifacts_.size() << '\n';
        for (std::size_t i = 0; i < artifacts_.size(); ++i) {
            os << "artifact_" << i << " = " << artifacts_[i].first << '\n';
            os << "sha256_" << i << " = " << artifacts_[i].second << '\n';
        }
        const auto path = dir_ / (stem + ".manifest.ini");
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << os.str();
    }

    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& artifacts() const { return artifacts_; }
    [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::vector<std::pair<std::string, std::string>> artifacts_;
};

}  // namespace levypop::cli
