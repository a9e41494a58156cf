#include "permx/fileio.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "permx/error.hpp"

namespace permx {

namespace fs = std::filesystem;

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes;
  std::error_code ec;
  if (const auto size = fs::file_size(path, ec); !ec) bytes.reserve(size);
  bytes.assign(std::istreambuf_iterator<char>(in),
               std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::io, "read error on " + path.string());
  return bytes;
}

void write_file_atomic(const fs::path& path,
                       std::span<const std::uint8_t> bytes) {
  AtomicFileWriter w(path);
  w.write(bytes);
  w.commit();
}

AtomicFileWriter::AtomicFileWriter(fs::path path) : path_(std::move(path)) {
  std::random_device rd;
  temp_ = path_;
  temp_ += ".tmp" + std::to_string(rd());
  file_ = std::fopen(temp_.c_str(), "wb");
  if (!file_) throw Error(ErrorKind::io, "cannot create " + temp_.string());
}

AtomicFileWriter::~AtomicFileWriter() {
  if (committed_) return;
  if (file_) std::fclose(file_);
  std::error_code ec;
  fs::remove(temp_, ec);
}

void AtomicFileWriter::write(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) return;
  if (std::fwrite(bytes.data(), 1, bytes.size(), file_) != bytes.size())
    throw Error(ErrorKind::io, "write error on " + temp_.string());
}

void AtomicFileWriter::commit() {
  const bool ok = std::fflush(file_) == 0;
  const bool closed = std::fclose(file_) == 0;
  file_ = nullptr;
  if (!ok || !closed)
    throw Error(ErrorKind::io, "write error on " + temp_.string());
  std::error_code ec;
  fs::rename(temp_, path_, ec);
  if (ec) throw Error(ErrorKind::io, "cannot rename onto " + path_.string());
  committed_ = true;
}

}  // namespace permx
