// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(e) = graphonlab_cli::init_threads() {
        eprintln!("graphonlab: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    let code = graphonlab_cli::app::run(std::env::args_os(), &mut std::io::stdout().lock());
    ExitCode::from(code as u8)
}
