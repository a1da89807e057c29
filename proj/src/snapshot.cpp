#include "hllg/snapshot.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace hllg {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
  public:
    Reader(const std::string& buf, const std::string& path) : buf_(buf), path_(path) {}
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    void raw(char* dst, std::size_t len) {
        need(len);
        std::memcpy(dst, buf_.data() + pos_, len);
        pos_ += len;
    }
    std::size_t remaining() const { return buf_.size() - pos_; }

  private:
    void need(std::size_t len) {
        if (pos_ + len > buf_.size())
            throw FormatError("snapshot '" + path_ + "' is truncated");
    }
    const std::string& buf_;
    std::string path_;
    std::size_t pos_ = 0;
};

std::string header_bytes(const SphereField& u, double t, std::uint64_t payload_len) {
    std::string out;
    out += "HLLG";
    put_u32(out, kSnapshotVersion);
    put_u32(out, static_cast<std::uint32_t>(u.grid.n));
    put_u32(out, static_cast<std::uint32_t>(u.m));
    for (int j = 0; j < 3; ++j) put_u32(out, static_cast<std::uint32_t>(u.grid.dims[j]));
    for (int j = 0; j < 3; ++j) put_f64(out, u.grid.box[j]);
    put_f64(out, t);
    put_u64(out, payload_len);
    return out;
}

}  // namespace

void write_snapshot(const SphereField& u, double t, const std::string& path) {
    const std::size_t total = u.grid.size();
    const int ncomp = u.ncomp();
    const std::uint64_t payload_len = static_cast<std::uint64_t>(total) * ncomp * 8;
    std::string out = header_bytes(u, t, payload_len);
    out.reserve(out.size() + payload_len);
    for (std::size_t i = 0; i < total; ++i)
        for (int c = 0; c < ncomp; ++c) put_f64(out, u.values.comps[c][i]);

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw FormatError("cannot open '" + path + "' for writing");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw FormatError("write failed for '" + path + "'");
}

std::pair<SphereField, double> read_snapshot(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open snapshot '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string buf = ss.str();
    Reader r(buf, path);

    char magic[4];
    r.raw(magic, 4);
    if (std::memcmp(magic, "HLLG", 4) != 0)
        throw FormatError("snapshot '" + path + "': bad magic bytes");
    const std::uint32_t version = r.u32();
    if (version != kSnapshotVersion)
        throw FormatError("snapshot '" + path + "': unsupported version " +
                          std::to_string(version));
    const int n = static_cast<int>(r.u32());
    const int m = static_cast<int>(r.u32());
    std::array<int, 3> dims;
    for (int j = 0; j < 3; ++j) dims[j] = static_cast<int>(r.u32());
    std::array<double, 3> box;
    for (int j = 0; j < 3; ++j) box[j] = r.f64();
    const double t = r.f64();
    const std::uint64_t payload_len = r.u64();

    SpectralGrid g = SpectralGrid::make(n, dims, box);
    const std::size_t total = g.size();
    const int ncomp = m + 1;
    if (payload_len != static_cast<std::uint64_t>(total) * ncomp * 8)
        throw FormatError("snapshot '" + path + "': payload length mismatch");
    if (r.remaining() < payload_len)
        throw FormatError("snapshot '" + path + "' is truncated");

    NodalField v(g, ncomp);
    for (std::size_t i = 0; i < total; ++i)
        for (int c = 0; c < ncomp; ++c) v.comps[c][i] = r.f64();

    // Q is not persisted; take the normalized spatial mean.
    std::vector<double> Q(ncomp, 0.0);
    for (int c = 0; c < ncomp; ++c)
        for (std::size_t i = 0; i < total; ++i) Q[c] += v.comps[c][i];
    double qn = 0.0;
    for (double q : Q) qn += q * q;
    qn = std::sqrt(qn);
    if (qn < 1e-12 * total) {
        std::fill(Q.begin(), Q.end(), 0.0);
        Q.back() = 1.0;
    }
    SphereField u = make_sphere_field(g, m, Q, std::move(v));
    return {std::move(u), t};
}

std::string describe_snapshot(const std::string& path) {
    auto [u, t] = read_snapshot(path);
    std::ostringstream os;
    os.precision(10);
    os << "snapshot " << path << "\n";
    os << "  n = " << u.grid.n << ", m = " << u.m << ", dims =";
    for (int j = 0; j < u.grid.n; ++j) os << ' ' << u.grid.dims[j];
    os << ", box =";
    for (int j = 0; j < u.grid.n; ++j) os << ' ' << u.grid.box[j];
    os << "\n  t = " << t << "\n";
    os << "  max | |u|-1 | = " << unit_drift(u.values) << "\n";
    return os.str();
}

}  // namespace hllg
