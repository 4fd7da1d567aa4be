/*
 * Copyright (c) 2026, The opac authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

namespace opac {

/// Default tolerance for column/row sums of probability data.
inline constexpr double kStochasticTol = 1e-9;

/// Slack used when comparing grid-derived box coordinates against each other
/// or against the opacity threshold. Grid corners such as 3 * 0.2 are not
/// exactly representable, so cell-vs-cell and cell-vs-threshold comparisons
/// are done with this margin.
inline constexpr double kGeomTol = 1e-9;

/// Slack for checking a concrete belief against the threshold.
inline constexpr double kBeliefTol = 1e-12;

}  // namespace opac
