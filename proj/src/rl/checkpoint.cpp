#include "uavmf/rl/checkpoint.hpp"

#include <cstring>

namespace uavmf::rl::checkpoint_io {

namespace {
constexpr char kMagic[8] = {'U', 'A', 'V', 'M', 'F', 'C', 'K', 'P'};
}

void write_header(std::ostream& out) {
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kCheckpointVersion);
}

void read_header(std::istream& in) {
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw CheckpointError("not a checkpoint file");
  const auto version = read_pod<std::uint32_t>(in);
  if (version != kCheckpointVersion)
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
}

void write_vector(std::ostream& out, const std::vector<double>& v) {
  write_pod(out, static_cast<std::uint64_t>(v.size()));
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> read_vector(std::istream& in) {
  const auto n = read_pod<std::uint64_t>(in);
  if (n > (1ULL << 32)) throw CheckpointError("checkpoint vector too large");
  std::vector<double> v(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw CheckpointError("checkpoint truncated");
  return v;
}

void write_bytes(std::ostream& out, const std::vector<std::uint8_t>& v) {
  write_pod(out, static_cast<std::uint64_t>(v.size()));
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size()));
}

std::vector<std::uint8_t> read_bytes(std::istream& in) {
  const auto n = read_pod<std::uint64_t>(in);
  if (n > (1ULL << 32)) throw CheckpointError("checkpoint vector too large");
  std::vector<std::uint8_t> v(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n));
  if (!in) throw CheckpointError("checkpoint truncated");
  return v;
}

void write_string(std::ostream& out, const std::string& s) {
  write_pod(out, static_cast<std::uint64_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
  const auto n = read_pod<std::uint64_t>(in);
  if (n > (1ULL << 24)) throw CheckpointError("checkpoint string too large");
  std::string s(n, '\0');
  in.read(s.data(), static_cast<std::streamsize>(n));
  if (!in) throw CheckpointError("checkpoint truncated");
  return s;
}

void write_network(std::ostream& out, const Mlp& net) {
  write_pod(out, static_cast<std::uint32_t>(net.layers().size()));
  for (const DenseLayer& l : net.layers()) {
    write_pod(out, static_cast<std::uint32_t>(l.weight.rows()));
    write_pod(out, static_cast<std::uint32_t>(l.weight.cols()));
  }
  write_vector(out, net.flat());
}

void read_network(std::istream& in, Mlp& net) {
  const auto n = read_pod<std::uint32_t>(in);
  if (n != net.layers().size()) throw CheckpointError("checkpoint layer count mismatch");
  for (const DenseLayer& l : net.layers()) {
    const auto rows = read_pod<std::uint32_t>(in);
    const auto cols = read_pod<std::uint32_t>(in);
    if (rows != l.weight.rows() || cols != l.weight.cols())
      throw CheckpointError("checkpoint layer shape mismatch");
  }
  const std::vector<double> params = read_vector(in);
  if (params.size() != net.num_parameters())
    throw CheckpointError("checkpoint parameter count mismatch");
  net.set_flat(params);
}

void write_buffer(std::ostream& out, const ReplayBuffer& buffer) {
  write_pod(out, static_cast<std::uint64_t>(buffer.size()));
  write_pod(out, static_cast<std::uint64_t>(buffer.cursor()));
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    const Experience& e = buffer.at(i);
    write_vector(out, e.state);
    write_pod(out, static_cast<std::int32_t>(e.action));
    write_pod(out, e.reward);
    write_vector(out, e.next_state);
    write_bytes(out, e.next_mask);
    write_pod(out, static_cast<std::int32_t>(e.meanfield_tag));
  }
}

void read_buffer(std::istream& in, ReplayBuffer& buffer) {
  const auto n = read_pod<std::uint64_t>(in);
  const auto cursor = read_pod<std::uint64_t>(in);
  if (n > buffer.capacity()) throw CheckpointError("checkpoint buffer exceeds capacity");
  std::vector<Experience> items;
  items.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    Experience e;
    e.state = read_vector(in);
    e.action = read_pod<std::int32_t>(in);
    e.reward = read_pod<double>(in);
    e.next_state = read_vector(in);
    e.next_mask = read_bytes(in);
    e.meanfield_tag = read_pod<std::int32_t>(in);
    items.push_back(std::move(e));
  }
  buffer.restore(std::move(items), static_cast<std::size_t>(cursor));
}

}  // namespace uavmf::rl::checkpoint_io
