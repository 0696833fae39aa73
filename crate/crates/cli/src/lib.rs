//! The `colog` command line tool and its HTTP play service.

pub mod service;
