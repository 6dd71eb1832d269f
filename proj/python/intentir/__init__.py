# Copyright 2026 The Intentir Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Intent-aware analysis of case retrieval sessions.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its functions unchanged.
"""

from intentir._core import *  # noqa: F401,F403
from intentir._core import version as _version

__version__ = _version()
