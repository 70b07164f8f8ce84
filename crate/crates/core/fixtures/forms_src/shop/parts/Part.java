package shop.parts;

public class Part {
}
