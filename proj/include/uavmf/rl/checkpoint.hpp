#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavmf/rl/mlp.hpp"
#include "uavmf/rl/replay.hpp"

namespace uavmf::rl {

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Little helpers for the binary checkpoint stream. Values are written in host
// byte order; the header records the version so stale files are rejected.
namespace checkpoint_io {

void write_header(std::ostream& out);
void read_header(std::istream& in);

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw CheckpointError("checkpoint truncated");
  return v;
}

void write_vector(std::ostream& out, const std::vector<double>& v);
std::vector<double> read_vector(std::istream& in);
void write_bytes(std::ostream& out, const std::vector<std::uint8_t>& v);
std::vector<std::uint8_t> read_bytes(std::istream& in);
void write_string(std::ostream& out, const std::string& s);
std::string read_string(std::istream& in);

// Layer shapes followed by parameters. Reading checks the shapes against
// the destination network.
void write_network(std::ostream& out, const Mlp& net);
void read_network(std::istream& in, Mlp& net);

void write_buffer(std::ostream& out, const ReplayBuffer& buffer);
void read_buffer(std::istream& in, ReplayBuffer& buffer);

}  // namespace checkpoint_io

}  // namespace uavmf::rl
