//! Pretty JSON in which nested arrays (matrix rows, complex pairs) stay on one line.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

#[derive(Clone, Copy, PartialEq)]
enum Frame {
    Array,
    Object,
    Compact,
}

struct MatrixFormatter {
    pretty: PrettyFormatter<'static>,
    stack: Vec<Frame>,
}

impl MatrixFormatter {
    fn compact(&self) -> bool {
        self.stack.last() == Some(&Frame::Compact)
    }
}

impl Formatter for MatrixFormatter {
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        if matches!(self.stack.last(), Some(Frame::Array | Frame::Compact)) {
            self.stack.push(Frame::Compact);
            w.write_all(b"[")
        } else {
            self.stack.push(Frame::Array);
            self.pretty.begin_array(w)
        }
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        match self.stack.pop() {
            Some(Frame::Compact) => w.write_all(b"]"),
            _ => self.pretty.end_array(w),
        }
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if self.compact() {
            if first { Ok(()) } else { w.write_all(b",") }
        } else {
            self.pretty.begin_array_value(w, first)
        }
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        if self.compact() { Ok(()) } else { self.pretty.end_array_value(w) }
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        if self.compact() {
            w.write_all(b"{")
        } else {
            self.stack.push(Frame::Object);
            self.pretty.begin_object(w)
        }
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        if self.compact() {
            w.write_all(b"}")
        } else {
            self.stack.pop();
            self.pretty.end_object(w)
        }
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if self.compact() {
            if first { Ok(()) } else { w.write_all(b",") }
        } else {
            self.pretty.begin_object_key(w, first)
        }
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        if self.compact() { w.write_all(b":") } else { self.pretty.begin_object_value(w) }
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        if self.compact() { Ok(()) } else { self.pretty.end_object_value(w) }
    }
}

pub fn to_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let fmt = MatrixFormatter { pretty: PrettyFormatter::new(), stack: Vec::new() };
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    value.serialize(&mut ser).expect("serialization into memory");
    String::from_utf8(out).expect("JSON is UTF-8")
}
