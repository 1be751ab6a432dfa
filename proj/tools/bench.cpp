// Benchmark comparing the OpenMP kernels against the serial reference
// implementations on a synthetic two-label phantom.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include <omp.h>

#include "vsm/measurement.hpp"
#include "vsm/morphology.hpp"
#include "vsm/reference.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn, int repeats) {
  // One warm-up, then best of `repeats`.
  fn();
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    auto t0 = Clock::now();
    fn();
    auto t1 = Clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

// Ellipsoid pair: an intrameatal stalk and a larger extrameatal bulge.
vsm::LabelVolume make_phantom(std::size_t n) {
  vsm::LabelVolume v;
  v.dims = {n, n, n / 2};
  v.spacing_mm = {0.5, 0.5, 1.0};
  v.voxels.assign(v.voxel_count(), 0);
  const double cx = 0.35 * n, cy = 0.5 * n, cz = 0.25 * n;
  const double ex = 0.55 * n, ey = 0.5 * n;
  for (std::size_t z = 0; z < v.nz(); ++z) {
    for (std::size_t y = 0; y < v.ny(); ++y) {
      for (std::size_t x = 0; x < v.nx(); ++x) {
        double dx = (x - cx) / (0.10 * n), dy = (y - cy) / (0.05 * n),
               dz = (static_cast<double>(z) - cz) / (0.08 * n);
        if (dx * dx + dy * dy + dz * dz <= 1.0) {
          v.at(x, y, z) = vsm::LabelVolume::kIntrameatal;
          continue;
        }
        double fx = (x - ex) / (0.16 * n), fy = (y - ey) / (0.14 * n),
               fz = (static_cast<double>(z) - cz) / (0.12 * n);
        if (fx * fx + fy * fy + fz * fz <= 1.0) {
          v.at(x, y, z) = vsm::LabelVolume::kExtrameatal;
        }
      }
    }
  }
  return v;
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-24s %10.2f ms %10.2f ms %8.2fx\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

} // namespace

int main(int argc, char** argv) {
  std::size_t size = 192;
  int repeats = 3;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--size" && i + 1 < argc) size = std::stoul(argv[++i]);
    else if (arg == "--repeats" && i + 1 < argc) repeats = std::stoi(argv[++i]);
    else {
      std::fprintf(stderr, "usage: vsm_bench [--size N] [--repeats R]\n");
      return 1;
    }
  }

  const int max_threads = omp_get_max_threads();
  std::printf("phantom %zux%zux%zu, %d threads\n", size, size, size / 2, max_threads);
  std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  vsm::LabelVolume phantom = make_phantom(size);
  vsm::BinaryMask3D whole = vsm::extract_mask(phantom, vsm::LabelSet::whole_tumour());
  vsm::BinaryMask3D extra = vsm::extract_mask(phantom, vsm::LabelSet::extrameatal());

  {
    volatile double sink = 0;
    double serial = time_ms([&] { sink = vsm::ref::dice_serial(whole, extra); }, repeats);
    double parallel = time_ms([&] { sink = vsm::dice(whole, extra); }, repeats);
    (void)sink;
    report("dice", serial, parallel);
  }
  {
    volatile double sink = 0;
    double serial = time_ms(
        [&] {
          std::size_t counts[3];
          vsm::ref::count_labels_serial(phantom, counts);
          sink = static_cast<double>(counts[1]);
        },
        repeats);
    double parallel = time_ms([&] { sink = vsm::tumour_volumes(phantom).whole_mm3; }, repeats);
    (void)sink;
    report("tumour_volumes", serial, parallel);
  }
  {
    volatile double sink = 0;
    double serial = time_ms(
        [&] {
          sink = vsm::ref::region_diameter_serial(phantom, vsm::LabelSet::whole_tumour(),
                                                  vsm::Convention::pixel_centers);
        },
        repeats);
    double parallel = time_ms(
        [&] {
          sink = vsm::region_diameter(phantom, vsm::LabelSet::whole_tumour(),
                                      vsm::Convention::pixel_centers)
                     .length_mm;
        },
        repeats);
    (void)sink;
    report("region_diameter", serial, parallel);
  }
  {
    volatile int sink = 0;
    double serial = time_ms(
        [&] {
          omp_set_num_threads(1);
          auto r = vsm::aux_features(phantom, vsm::Convention::pixel_centers);
          sink = r.d_extra_par ? r.d_extra_par->slice_index : -1;
          omp_set_num_threads(max_threads);
        },
        repeats);
    double parallel = time_ms(
        [&] {
          auto r = vsm::aux_features(phantom, vsm::Convention::pixel_centers);
          sink = r.d_extra_par ? r.d_extra_par->slice_index : -1;
        },
        repeats);
    (void)sink;
    report("aux_features", serial, parallel);
  }
  return 0;
}
