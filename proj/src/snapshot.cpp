#include "euler_lab/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "json.hpp"

namespace euler_lab {
namespace {

std::filesystem::path strip(const std::filesystem::path& p) {
  const auto ext = p.extension();
  if (ext == ".bin" || ext == ".json") return p.parent_path() / p.stem();
  return p;
}

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
  return std::filesystem::path(stem.string() + suffix);
}

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

}  // namespace

std::filesystem::path write_snapshot(const std::filesystem::path& stem_in, const SpectralField& f) {
  const auto stem = strip(stem_in);
  if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
  const auto bin = with_suffix(stem, ".bin");
  std::ofstream out(bin, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + bin.string());
  for (const cplx& c : f.coeffs()) {
    const double parts[2] = {c.real(), c.imag()};
    for (double d : parts) {
      std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(d));
      out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
  nlohmann::json meta = {{"n", f.grid().n},
                         {"rank", f.components()},
                         {"hermitian", f.hermitian()},
                         {"dealias_fraction", f.grid().dealias_fraction}};
  std::ofstream(with_suffix(stem, ".json")) << meta.dump(2) << '\n';
  return bin;
}

SpectralField read_snapshot(const std::filesystem::path& path) {
  const auto stem = strip(path);
  std::ifstream meta_in(with_suffix(stem, ".json"));
  if (!meta_in) throw RejectedInput("missing snapshot descriptor " + with_suffix(stem, ".json").string());
  GridSpec grid;
  int rank = 0;
  bool hermitian = false;
  try {
    const nlohmann::json meta = nlohmann::json::parse(meta_in);
    grid = GridSpec{meta.at("n").get<int>(), meta.at("dealias_fraction").get<double>()};
    rank = meta.at("rank").get<int>();
    hermitian = meta.at("hermitian").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw RejectedInput("bad snapshot descriptor: " + std::string(e.what()));
  }
  grid.validate();
  if (rank != 1 && rank != 3) throw RejectedInput("snapshot rank must be 1 or 3");
  SpectralField f(grid, rank == 1 ? Rank::scalar : Rank::vector3, hermitian);

  std::ifstream in(with_suffix(stem, ".bin"), std::ios::binary);
  if (!in) throw RejectedInput("missing snapshot data " + with_suffix(stem, ".bin").string());
  for (cplx& c : f.coeffs()) {
    double parts[2];
    for (double& d : parts) {
      std::uint64_t bits = 0;
      if (!in.read(reinterpret_cast<char*>(&bits), sizeof bits)) throw RejectedInput("snapshot data truncated");
      d = std::bit_cast<double>(to_le(bits));
    }
    c = {parts[0], parts[1]};
  }
  if (in.peek() != std::char_traits<char>::eof()) throw RejectedInput("snapshot data longer than descriptor");
  return f;
}

}  // namespace euler_lab
