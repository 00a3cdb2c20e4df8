#include "nlch/io.hpp"

#include <array>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace nlch {

namespace {

std::ofstream open_out(const std::string& file, bool binary = false) {
    std::ofstream out(file, binary ? std::ios::binary : std::ios::out);
    if (!out) throw IoError("cannot open for writing: " + file);
    return out;
}

std::ifstream open_in(const std::string& file, bool binary = false) {
    std::ifstream in(file, binary ? std::ios::binary : std::ios::in);
    if (!in) throw IoError("cannot open for reading: " + file);
    return in;
}

void write_f64(std::ostream& out, double v) { out.write(reinterpret_cast<const char*>(&v), 8); }
void write_u64(std::ostream& out, std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); }
void write_i32(std::ostream& out, std::int32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }

double read_f64(std::istream& in) {
    double v;
    in.read(reinterpret_cast<char*>(&v), 8);
    if (!in) throw IoError("unexpected end of binary stream");
    return v;
}
std::uint64_t read_u64(std::istream& in) {
    std::uint64_t v;
    in.read(reinterpret_cast<char*>(&v), 8);
    if (!in) throw IoError("unexpected end of binary stream");
    return v;
}
std::int32_t read_i32(std::istream& in) {
    std::int32_t v;
    in.read(reinterpret_cast<char*>(&v), 4);
    if (!in) throw IoError("unexpected end of binary stream");
    return v;
}

constexpr char kPathMagic[8] = {'N', 'L', 'C', 'H', 'W', 'P', '1', '\0'};
constexpr char kTrajMagic[8] = {'N', 'L', 'C', 'H', 'T', 'R', '1', '\0'};

} // namespace

void export_path_csv(const WienerPath& path, const std::string& file) {
    auto out = open_out(file);
    out << "# nlch-wiener-path/1\n";
    char head[160];
    std::snprintf(head, sizeof head,
                  "# master_seed=%" PRIu64 " path_index=%" PRIu64 " dt=%.17g steps=%d modes=%d\n",
                  path.master_seed, path.path_index, path.dt, path.steps, path.modes);
    out << head << "step,mode,increment\n";
    char line[64];
    for (int n = 0; n < path.steps; ++n)
        for (int k = 0; k < path.modes; ++k) {
            std::snprintf(line, sizeof line, "%d,%d,%.17g\n", n, k, path.inc(n, k));
            out << line;
        }
}

WienerPath import_path_csv(const std::string& file) {
    auto in = open_in(file);
    std::string line;
    if (!std::getline(in, line) || line != "# nlch-wiener-path/1")
        throw IoError("not a wiener path file: " + file);
    if (!std::getline(in, line)) throw IoError("missing path header line");
    WienerPath p;
    if (std::sscanf(line.c_str(),
                    "# master_seed=%" SCNu64 " path_index=%" SCNu64 " dt=%lg steps=%d modes=%d",
                    &p.master_seed, &p.path_index, &p.dt, &p.steps, &p.modes) != 5)
        throw IoError("malformed path header line");
    if (!std::getline(in, line) || line != "step,mode,increment")
        throw IoError("missing path column header");
    p.increments.assign(static_cast<size_t>(p.steps) * p.modes, 0.0);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int n, k;
        double v;
        if (std::sscanf(line.c_str(), "%d,%d,%lg", &n, &k, &v) != 3)
            throw IoError("malformed path row: " + line);
        if (n < 0 || n >= p.steps || k < 0 || k >= p.modes)
            throw IoError("path row out of range: " + line);
        p.increments[static_cast<size_t>(n) * p.modes + k] = v;
    }
    return p;
}

void export_path_binary(const WienerPath& path, const std::string& file) {
    auto out = open_out(file, true);
    out.write(kPathMagic, 8);
    write_u64(out, path.master_seed);
    write_u64(out, path.path_index);
    write_f64(out, path.dt);
    write_i32(out, path.steps);
    write_i32(out, path.modes);
    out.write(reinterpret_cast<const char*>(path.increments.data()),
              static_cast<std::streamsize>(path.increments.size() * 8));
}

WienerPath import_path_binary(const std::string& file) {
    auto in = open_in(file, true);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kPathMagic, 8) != 0)
        throw IoError("not a binary wiener path file: " + file);
    WienerPath p;
    p.master_seed = read_u64(in);
    p.path_index = read_u64(in);
    p.dt = read_f64(in);
    p.steps = read_i32(in);
    p.modes = read_i32(in);
    if (p.steps < 0 || p.modes < 0) throw IoError("corrupt path header");
    p.increments.resize(static_cast<size_t>(p.steps) * p.modes);
    in.read(reinterpret_cast<char*>(p.increments.data()),
            static_cast<std::streamsize>(p.increments.size() * 8));
    if (!in) throw IoError("truncated path payload");
    return p;
}

namespace {

void trajectory_header(const Trajectory& traj, std::string& out) {
    char head[240];
    std::snprintf(head, sizeof head,
                  "# config_hash=%" PRIu64 " master_seed=%" PRIu64 " path_index=%" PRIu64
                  " dt=%.17g total_steps=%ld record_stride=%d status=%s blowup_step=%ld\n",
                  traj.config_hash, traj.path.master_seed, traj.path.path_index, traj.dt,
                  traj.total_steps, traj.record_stride,
                  traj.completed() ? "completed" : "blowup", traj.blowup_step);
    out = head;
}

} // namespace

void export_trajectory_csv(const Trajectory& traj, const std::string& file) {
    auto out = open_out(file);
    out << "# nlch-trajectory/1\n";
    std::string head;
    trajectory_header(traj, head);
    out << head << "t,mode,coefficient\n";
    char line[80];
    for (size_t i = 0; i < traj.states.size(); ++i)
        for (size_t k = 0; k < traj.states[i].coeffs.size(); ++k) {
            std::snprintf(line, sizeof line, "%.17g,%zu,%.17g\n", traj.times[i], k,
                          traj.states[i].coeffs[k]);
            out << line;
        }
}

void export_trajectory_binary(const Trajectory& traj, const std::string& file) {
    auto out = open_out(file, true);
    out.write(kTrajMagic, 8);
    write_u64(out, traj.config_hash);
    write_u64(out, traj.path.master_seed);
    write_u64(out, traj.path.path_index);
    write_f64(out, traj.dt);
    write_i32(out, static_cast<std::int32_t>(traj.total_steps));
    write_i32(out, traj.record_stride);
    write_i32(out, traj.completed() ? 0 : 1);
    write_i32(out, static_cast<std::int32_t>(traj.blowup_step));
    const std::int32_t nrec = static_cast<std::int32_t>(traj.states.size());
    const std::int32_t m = nrec > 0 ? static_cast<std::int32_t>(traj.states[0].coeffs.size()) : 0;
    write_i32(out, nrec);
    write_i32(out, m);
    for (size_t i = 0; i < traj.states.size(); ++i) {
        write_f64(out, traj.times[i]);
        out.write(reinterpret_cast<const char*>(traj.states[i].coeffs.data()),
                  static_cast<std::streamsize>(traj.states[i].coeffs.size() * 8));
    }
}

void export_trajectory_gnuplot(const Trajectory& traj, const std::string& file) {
    auto out = open_out(file);
    out << "# t";
    if (!traj.states.empty())
        for (size_t k = 0; k < traj.states[0].coeffs.size(); ++k) out << " c" << k;
    out << "\n";
    char buf[40];
    for (size_t i = 0; i < traj.states.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g", traj.times[i]);
        out << buf;
        for (double c : traj.states[i].coeffs) {
            std::snprintf(buf, sizeof buf, " %.12g", c);
            out << buf;
        }
        out << "\n";
    }
}

KernelSpec import_kernel_table(const std::string& file) {
    auto in = open_in(file);
    std::string line;
    int dim = 0;
    std::vector<int> shape;
    std::vector<double> values;
    bool got_dim = false, got_shape = false;
    std::vector<bool> seen;
    std::int64_t total = 0;

    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        if (!got_dim) {
            std::string tag;
            ls >> tag >> dim;
            if (tag != "dim" || ls.fail() || dim < 1 || dim > 3)
                throw IoError("kernel table must start with 'dim <1|2|3>'");
            got_dim = true;
            continue;
        }
        if (!got_shape) {
            std::string tag;
            ls >> tag;
            if (tag != "shape") throw IoError("kernel table needs a 'shape' line");
            shape.resize(static_cast<size_t>(dim));
            total = 1;
            for (int i = 0; i < dim; ++i) {
                ls >> shape[static_cast<size_t>(i)];
                if (ls.fail() || shape[static_cast<size_t>(i)] < 1 ||
                    shape[static_cast<size_t>(i)] % 2 == 0)
                    throw IoError("kernel table shape entries must be odd positive integers");
                total *= shape[static_cast<size_t>(i)];
            }
            values.assign(static_cast<size_t>(total), 0.0);
            seen.assign(static_cast<size_t>(total), false);
            got_shape = true;
            continue;
        }
        std::array<int, 3> off{0, 0, 0};
        double v;
        for (int i = 0; i < dim; ++i) ls >> off[static_cast<size_t>(i)];
        ls >> v;
        if (ls.fail()) throw IoError("malformed kernel table row: " + line);
        std::int64_t flat = 0;
        for (int i = 0; i < dim; ++i) {
            const int half = (shape[static_cast<size_t>(i)] - 1) / 2;
            const int o = off[static_cast<size_t>(i)];
            if (o < -half || o > half) throw IoError("kernel table offset out of range: " + line);
            flat = flat * shape[static_cast<size_t>(i)] + (o + half);
        }
        values[static_cast<size_t>(flat)] = v;
        seen[static_cast<size_t>(flat)] = true;
    }
    if (!got_shape) throw IoError("kernel table has no shape line");
    for (bool s : seen)
        if (!s) throw IoError("kernel table is missing rows");
    return KernelSpec::table(std::move(shape), std::move(values));
}

void export_kernel_table(const KernelTables& tables, const std::string& file) {
    const BasisSpec& b = tables.basis();
    const int d = b.dim();
    auto out = open_out(file);
    out << "# nlch-kernel-table/1 (offsets are integer multiples of the grid spacing)\n";
    out << "dim " << d << "\n";
    out << "shape";
    std::int64_t total = 1;
    for (int i = 0; i < d; ++i) {
        out << " " << tables.offset_count(i);
        total *= tables.offset_count(i);
    }
    out << "\n";
    char buf[48];
    for (std::int64_t flat = 0; flat < total; ++flat) {
        std::int64_t rem = flat;
        std::array<int, 3> off{0, 0, 0};
        for (int i = d - 1; i >= 0; --i) {
            const int c = tables.offset_count(i);
            off[static_cast<size_t>(i)] = static_cast<int>(rem % c) - b.grid_size(i);
            rem /= c;
        }
        for (int i = 0; i < d; ++i) out << off[static_cast<size_t>(i)] << " ";
        std::snprintf(buf, sizeof buf, "%.17g\n",
                      tables.kernel_at({off.data(), static_cast<size_t>(d)}));
        out << buf;
    }
}

} // namespace nlch
