#ifndef ERQA_ERQA_HPP
#define ERQA_ERQA_HPP

// Umbrella header for the full toolkit.

#include "erqa/canny.hpp"
#include "erqa/correlate.hpp"
#include "erqa/csv.hpp"
#include "erqa/error.hpp"
#include "erqa/image.hpp"
#include "erqa/matching.hpp"
#include "erqa/panel.hpp"
#include "erqa/png_io.hpp"
#include "erqa/report.hpp"
#include "erqa/runner.hpp"
#include "erqa/shift.hpp"
#include "erqa/ssim.hpp"
#include "erqa/stats.hpp"

#endif // ERQA_ERQA_HPP
